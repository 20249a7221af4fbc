import { ApiClient, ApiError } from "./api.js";
import {
  algorithmSelected,
  canRun,
  classIndexChanged,
  datasetLoaded,
  detailsClosed,
  detailsOpened,
  errorRaised,
  isRunActive,
  paramEdited,
  runStarted,
  runUpdated,
  selectedAlgorithm,
  Store,
  switchTab,
  withCatalog,
  type Tab,
} from "./state.js";
import type { RunSpec } from "./types.js";
import { render, type Handlers } from "./ui.js";

export interface AppOptions {
  pollIntervalMs?: number;
}

/** Wires the store, the API client and the renderer together.
 * Returns the store and the action set so tests can drive the app. */
export function createApp(root: HTMLElement, api: ApiClient, options: AppOptions = {}) {
  const pollInterval = options.pollIntervalMs ?? 500;
  const store = new Store();
  let pollTimer: ReturnType<typeof setTimeout> | null = null;

  function stopPolling() {
    if (pollTimer !== null) {
      clearTimeout(pollTimer);
      pollTimer = null;
    }
  }

  async function pollOnce(runId: string): Promise<void> {
    try {
      const snapshot = await api.pollRun(runId);
      store.update((s) => runUpdated(s, snapshot));
      if (snapshot.status === "pending" || snapshot.status === "running") {
        pollTimer = setTimeout(() => void pollOnce(runId), pollInterval);
      } else {
        stopPolling();
      }
    } catch (error) {
      stopPolling();
      store.update((s) => errorRaised(s, describe(error)));
    }
  }

  function buildSpec(): RunSpec | null {
    const state = store.getState();
    const info = selectedAlgorithm(state);
    if (!info || !state.selection) return null;
    const params: Record<string, number | boolean> = {};
    for (const p of info.params) {
      const raw = state.selection.params[p.name];
      params[p.name] = p.kind === "flag" ? raw === "true" : Number(raw);
    }
    return {
      algorithm: info.id,
      params,
      seed: 1,
      folds: 10,
      class_index: state.classIndex,
    };
  }

  const actions = {
    async init(): Promise<void> {
      try {
        const catalog = await api.algorithms();
        store.update((s) => withCatalog(s, catalog));
      } catch (error) {
        store.update((s) => errorRaised(s, describe(error)));
      }
    },

    switchTab(tab: Tab): void {
      store.update((s) => switchTab(s, tab));
    },

    async loadDataset(filename: string, content: string): Promise<void> {
      try {
        const stored = await api.uploadDataset(filename, content);
        store.update((s) => datasetLoaded(s, stored));
      } catch (error) {
        store.update((s) => errorRaised(s, describe(error)));
      }
    },

    setClassIndex(value: string): void {
      const index = Number(value);
      store.update((s) => classIndexChanged(s, Number.isNaN(index) ? "last" : index));
    },

    selectAlgorithm(id: string): void {
      store.update((s) => algorithmSelected(s, id));
    },

    editParam(name: string, value: string): void {
      store.update((s) => paramEdited(s, name, value));
    },

    async startOrStop(): Promise<void> {
      const state = store.getState();
      if (isRunActive(state)) {
        try {
          const snapshot = await api.cancelRun(state.run!.id);
          store.update((s) => runUpdated(s, snapshot));
          if (snapshot.status === "pending" || snapshot.status === "running") {
            return;    // the poller will observe the terminal state
          }
          stopPolling();
        } catch (error) {
          store.update((s) => errorRaised(s, describe(error)));
        }
        return;
      }
      if (!canRun(state)) return;
      const spec = buildSpec();
      if (!spec) return;
      try {
        const { run_id } = await api.startRun(state.dataset!.id, spec);
        store.update((s) => runStarted(s, {
          id: run_id, algorithm: spec.algorithm, status: "pending", progress: 0,
        }));
        await pollOnce(run_id);
      } catch (error) {
        store.update((s) => errorRaised(s, describe(error)));
      }
    },

    showDetails(): void {
      store.update(detailsOpened);
    },

    closeDetails(): void {
      store.update(detailsClosed);
    },

    dispose(): void {
      stopPolling();
    },
  };

  const handlers: Handlers = {
    onTab: (tab) => actions.switchTab(tab),
    onFileChosen: (file) => {
      void readFileText(file).then((text) => actions.loadDataset(file.name, text));
    },
    onClassIndex: (value) => actions.setClassIndex(value),
    onSelectAlgorithm: (id) => actions.selectAlgorithm(id),
    onParamEdit: (name, value) => actions.editParam(name, value),
    onRunOrStop: () => void actions.startOrStop(),
    onShowDetails: () => actions.showDetails(),
    onCloseDetails: () => actions.closeDetails(),
  };

  store.subscribe((state) => render(root, state, handlers));
  render(root, store.getState(), handlers);
  return { store, actions };
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return error.message;
  return error instanceof Error ? error.message : String(error);
}

function readFileText(file: File): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result ?? ""));
    reader.onerror = () => reject(reader.error ?? new Error("file read failed"));
    reader.readAsText(file);
  });
}
