import type {
  AlgorithmInfo,
  ParamInfo,
  ResultDoc,
  RunSnapshot,
  StoredDataset,
} from "./types.js";

export type Tab = "load" | "select" | "run";

export interface Selection {
  id: string;
  /** raw edit-box values, keyed by parameter name */
  params: Record<string, string>;
}

export interface UiState {
  tab: Tab;
  algorithms: AlgorithmInfo[];
  dataset: StoredDataset | null;
  classIndex: number | "last";
  selection: Selection | null;
  run: RunSnapshot | null;
  lastResult: ResultDoc | null;
  detailsOpen: boolean;
  error: string | null;
}

export function initialState(): UiState {
  return {
    tab: "load",
    algorithms: [],
    dataset: null,
    classIndex: "last",
    selection: null,
    run: null,
    lastResult: null,
    detailsOpen: false,
    error: null,
  };
}

// -- pure transitions ---------------------------------------------------------

export function withCatalog(state: UiState, algorithms: AlgorithmInfo[]): UiState {
  return { ...state, algorithms };
}

export function switchTab(state: UiState, tab: Tab): UiState {
  return { ...state, tab };
}

/** A fresh upload clears the previous selection, run and result. */
export function datasetLoaded(state: UiState, dataset: StoredDataset): UiState {
  return {
    ...state,
    dataset,
    classIndex: "last",
    selection: null,
    run: null,
    lastResult: null,
    detailsOpen: false,
    error: null,
  };
}

export function classIndexChanged(state: UiState, index: number | "last"): UiState {
  return { ...state, classIndex: index };
}

/** Selecting an algorithm deselects any previous one. */
export function algorithmSelected(state: UiState, id: string): UiState {
  const info = state.algorithms.find((a) => a.id === id);
  if (!info) return { ...state, error: `unknown algorithm ${id}` };
  const params: Record<string, string> = {};
  for (const p of info.params) params[p.name] = String(p.default);
  return { ...state, selection: { id, params }, error: null };
}

export function paramEdited(state: UiState, name: string, value: string): UiState {
  if (!state.selection) return state;
  const params = { ...state.selection.params, [name]: value };
  return { ...state, selection: { ...state.selection, params } };
}

export function paramProblem(info: ParamInfo, raw: string): string | null {
  if (info.kind === "flag") {
    return raw === "true" || raw === "false" ? null : "expects true or false";
  }
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) return `expects a ${info.kind}`;
  if (info.kind === "int" && !Number.isInteger(value)) return "expects an integer";
  if (info.min !== undefined && value < info.min) return `must be at least ${info.min}`;
  if (info.max !== undefined && value > info.max) return `must be at most ${info.max}`;
  return null;
}

export function selectionProblems(state: UiState): Record<string, string> {
  const problems: Record<string, string> = {};
  if (!state.selection) return problems;
  const info = state.algorithms.find((a) => a.id === state.selection!.id);
  if (!info) return problems;
  for (const p of info.params) {
    const problem = paramProblem(p, state.selection.params[p.name] ?? "");
    if (problem) problems[p.name] = problem;
  }
  return problems;
}

export function selectedAlgorithm(state: UiState): AlgorithmInfo | null {
  if (!state.selection) return null;
  return state.algorithms.find((a) => a.id === state.selection!.id) ?? null;
}

export function isRunActive(state: UiState): boolean {
  return state.run !== null &&
    (state.run.status === "pending" || state.run.status === "running");
}

/** The Run action needs a dataset, exactly one algorithm, valid parameters
 * and no run already in flight. */
export function canRun(state: UiState): boolean {
  return state.dataset !== null &&
    state.selection !== null &&
    !isRunActive(state) &&
    Object.keys(selectionProblems(state)).length === 0;
}

export function runStarted(state: UiState, snapshot: RunSnapshot): UiState {
  return { ...state, run: snapshot, lastResult: null, detailsOpen: false, error: null };
}

export function runUpdated(state: UiState, snapshot: RunSnapshot): UiState {
  const next: UiState = { ...state, run: snapshot };
  if (snapshot.status === "done" && snapshot.result) {
    next.lastResult = snapshot.result;
  }
  if (snapshot.status === "failed") {
    next.error = snapshot.error ?? "run failed";
  }
  return next;
}

export function errorRaised(state: UiState, message: string): UiState {
  return { ...state, error: message };
}

export function detailsOpened(state: UiState): UiState {
  return canShowDetails(state) ? { ...state, detailsOpen: true } : state;
}

export function detailsClosed(state: UiState): UiState {
  return { ...state, detailsOpen: false };
}

/** Details exist only for classification results (confusion matrix). */
export function canShowDetails(state: UiState): boolean {
  return state.lastResult !== null && state.lastResult.confusion !== undefined;
}

// -- store --------------------------------------------------------------------

export class Store {
  private state: UiState = initialState();
  private listeners: ((state: UiState) => void)[] = [];

  getState(): UiState {
    return this.state;
  }

  set(next: UiState): void {
    this.state = next;
    for (const listener of this.listeners) listener(next);
  }

  update(transition: (state: UiState) => UiState): void {
    this.set(transition(this.state));
  }

  subscribe(listener: (state: UiState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
