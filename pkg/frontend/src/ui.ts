import {
  canRun,
  canShowDetails,
  isRunActive,
  selectedAlgorithm,
  selectionProblems,
  type Tab,
  type UiState,
} from "./state.js";
import type { ResultDoc } from "./types.js";

export interface Handlers {
  onTab(tab: Tab): void;
  onFileChosen(file: File): void;
  onClassIndex(value: string): void;
  onSelectAlgorithm(id: string): void;
  onParamEdit(name: string, value: string): void;
  onRunOrStop(): void;
  onShowDetails(): void;
  onCloseDetails(): void;
}

const esc = (text: unknown): string =>
  String(text).replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");

function tabsHtml(state: UiState): string {
  const tabs: [Tab, string][] = [["load", "Load"], ["select", "Select"], ["run", "Run"]];
  return `<nav class="tabs">${tabs.map(([id, label]) =>
    `<button data-testid="tab-${id}" class="tab${state.tab === id ? " active" : ""}"
      data-tab="${id}">${label}</button>`).join("")}</nav>`;
}

function loadPanelHtml(state: UiState): string {
  let summary = `<p class="hint">Load an ARFF training file to begin.</p>`;
  let classPicker = "";
  if (state.dataset) {
    const s = state.dataset.summary;
    const rows = s.attribute_details.map((a) => `
      <tr><td>${esc(a.name)}</td><td>${esc(a.kind)}</td>
      <td>${a.distinct}</td><td>${a.missing}</td></tr>`).join("");
    const classes = Object.entries(s.class_distribution)
      .map(([label, n]) => `${esc(label)}: ${n}`).join(", ");
    summary = `
      <div class="summary-panel" data-testid="summary-panel">
        <p><b>${esc(s.relation)}</b> — ${s.instances} instances,
           ${s.attributes} attributes (${esc(state.dataset.filename)})</p>
        <table class="grid">
          <thead><tr><th>attribute</th><th>kind</th><th>distinct</th><th>missing</th></tr></thead>
          <tbody>${rows}</tbody>
        </table>
        <p data-testid="class-distribution">class distribution: ${classes || "n/a"}</p>
      </div>`;
    const options = s.attribute_details.map((a, i) => {
      const selected = state.classIndex === i ||
        (state.classIndex === "last" && i === s.attribute_details.length - 1);
      return `<option value="${i}"${selected ? " selected" : ""}>${esc(a.name)}</option>`;
    }).join("");
    classPicker = `
      <label class="field">Set alternate class attribute:
        <select data-testid="class-index">${options}</select>
      </label>`;
  }
  return `
    <section class="panel" data-testid="panel-load">
      <label class="field">Load ARFF file:
        <input type="file" data-testid="file-input" accept=".arff,text/plain">
      </label>
      ${summary}
      ${classPicker}
    </section>`;
}

function selectPanelHtml(state: UiState): string {
  const families: [string, string][] = [
    ["classifier", "Classifiers"], ["clusterer", "Clusterers"],
    ["associator", "Association rules"]];
  const problems = selectionProblems(state);
  const groups = families.map(([family, label]) => {
    const algos = state.algorithms.filter((a) => a.family === family);
    if (!algos.length) return "";
    const items = algos.map((a) => {
      const active = state.selection?.id === a.id;
      return `<button class="algo${active ? " active" : ""}"
        data-testid="algo-${a.id}" data-algo="${a.id}">${a.id}</button>`;
    }).join("");
    return `<div class="algo-group"><h3>${label}</h3>${items}</div>`;
  }).join("");

  let params = "";
  const info = selectedAlgorithm(state);
  if (info && state.selection) {
    const fields = info.params.map((p) => {
      const raw = state.selection!.params[p.name] ?? "";
      const problem = problems[p.name];
      const range = [p.min !== undefined ? `min ${p.min}` : "",
                     p.max !== undefined ? `max ${p.max}` : ""]
        .filter(Boolean).join(", ");
      return `
        <label class="field">${esc(p.name)} <span class="hint">(${p.kind}${range ? ", " + range : ""})</span>
          <input data-testid="param-${p.name}" data-param="${p.name}" value="${esc(raw)}">
          ${problem ? `<span class="problem" data-testid="problem-${p.name}">${esc(problem)}</span>` : ""}
        </label>`;
    }).join("");
    params = `
      <div class="params" data-testid="param-editor">
        <h3>${esc(info.id)} parameters</h3>
        ${fields || "<p class='hint'>no parameters</p>"}
      </div>`;
  }
  return `
    <section class="panel" data-testid="panel-select">
      <p class="hint">Only one algorithm can be selected at a time.</p>
      ${groups}
      ${params}
    </section>`;
}

function resultHtml(doc: ResultDoc): string {
  if (doc.accuracy !== undefined) {
    const perClass = (doc.per_class ?? []).map((m) => `
      <tr><td>${esc(m.label)}</td><td>${m.precision.toFixed(4)}</td>
      <td>${m.recall.toFixed(4)}</td><td>${m.f1.toFixed(4)}</td></tr>`).join("");
    return `
      <p data-testid="accuracy">accuracy: <b>${doc.accuracy.toFixed(4)}</b> %</p>
      <table class="grid"><thead>
        <tr><th>class</th><th>precision</th><th>recall</th><th>f1</th></tr>
      </thead><tbody>${perClass}</tbody></table>`;
  }
  if (doc.clusters) {
    return `
      <p data-testid="cluster-sizes">cluster sizes: ${doc.clusters.sizes.join(", ")}
      (${doc.clusters.iterations} iterations,
      within-cluster score ${doc.clusters.within_score.toFixed(4)})</p>
      <pre class="model-text">${esc(doc.model_text)}</pre>`;
  }
  const rules = (doc.rules ?? []).map((r, i) => `
    <li>${esc(r.antecedent.join(" & "))} &rArr; ${esc(r.consequent.join(" & "))}
    <span class="hint">(support ${r.support.toFixed(4)},
    confidence ${r.confidence.toFixed(4)})</span></li>`).join("");
  return `<ol class="rules" data-testid="rules">${rules || "<li>no rules found</li>"}</ol>`;
}

function runPanelHtml(state: UiState): string {
  const running = isRunActive(state);
  const runnable = canRun(state);
  const status = state.run
    ? `${state.run.status} — ${(state.run.progress * 100).toFixed(0)}%`
    : "idle";
  const doc = state.lastResult;
  const times = doc
    ? `<p data-testid="times">build ${doc.build_time_s.toFixed(4)} s` +
      (doc.cv_time_s !== undefined
        ? `, cross-validation ${doc.cv_time_s.toFixed(4)} s</p>` : "</p>")
    : "";
  return `
    <section class="panel" data-testid="panel-run">
      <button data-testid="run-button" class="run${running ? " stop" : ""}"
        ${running || runnable ? "" : "disabled"}>${running ? "Stop" : "Run"}</button>
      <div class="status" data-testid="run-status">
        <span>${esc(status)}</span>
        <progress max="1" value="${state.run?.progress ?? 0}"></progress>
      </div>
      <div class="results" data-testid="results-panel">
        ${doc ? resultHtml(doc) : "<p class='hint'>results appear here</p>"}
      </div>
      ${times}
      ${canShowDetails(state)
        ? `<button data-testid="details-button">View details and confusion matrix</button>`
        : ""}
    </section>`;
}

function detailsHtml(state: UiState): string {
  const doc = state.lastResult;
  if (!doc || !doc.confusion || !doc.class_labels) return "";
  const labels = doc.class_labels;
  const header = `<tr><th></th>${labels.map((l) => `<th>${esc(l)}</th>`).join("")}</tr>`;
  const body = doc.confusion.map((row, i) => `
    <tr><th>${esc(labels[i])}</th>${row.map((v) =>
      `<td class="cm-cell">${v}</td>`).join("")}</tr>`).join("");
  const perClass = (doc.per_class ?? []).map((m) => `
    <tr><td>${esc(m.label)}</td><td>${m.precision.toFixed(4)}</td>
    <td>${m.recall.toFixed(4)}</td><td>${m.f1.toFixed(4)}</td></tr>`).join("");
  return `
    <section class="details" data-testid="details-view">
      <button data-testid="details-back">&larr; back</button>
      <h2>Accuracy by class</h2>
      <table class="grid"><thead>
        <tr><th>class</th><th>precision</th><th>recall</th><th>f1</th></tr>
      </thead><tbody>${perClass}</tbody></table>
      <h2>Confusion matrix</h2>
      <table class="grid confusion" data-testid="confusion-grid">
        <thead>${header}</thead><tbody>${body}</tbody>
      </table>
      <h2>Model</h2>
      <pre class="model-text" data-testid="model-text">${esc(doc.model_text)}</pre>
    </section>`;
}

export function render(root: HTMLElement, state: UiState, handlers: Handlers): void {
  if (state.detailsOpen) {
    root.innerHTML = `<main class="app">${detailsHtml(state)}</main>`;
    root.querySelector("[data-testid=details-back]")!
      .addEventListener("click", () => handlers.onCloseDetails());
    return;
  }

  const error = state.error
    ? `<div class="error-banner" data-testid="error-banner">${esc(state.error)}</div>`
    : "";
  const panel = state.tab === "load" ? loadPanelHtml(state)
    : state.tab === "select" ? selectPanelHtml(state) : runPanelHtml(state);
  root.innerHTML = `<main class="app">
    <h1>arffmine</h1>
    ${tabsHtml(state)}
    ${error}
    ${panel}
  </main>`;

  for (const button of root.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => handlers.onTab(button.dataset.tab as Tab));
  }
  const file = root.querySelector<HTMLInputElement>("[data-testid=file-input]");
  file?.addEventListener("change", () => {
    if (file.files && file.files[0]) handlers.onFileChosen(file.files[0]);
  });
  const classIndex = root.querySelector<HTMLSelectElement>("[data-testid=class-index]");
  classIndex?.addEventListener("change", () => handlers.onClassIndex(classIndex.value));
  for (const button of root.querySelectorAll<HTMLButtonElement>("[data-algo]")) {
    button.addEventListener("click", () =>
      handlers.onSelectAlgorithm(button.dataset.algo!));
  }
  for (const input of root.querySelectorAll<HTMLInputElement>("[data-param]")) {
    input.addEventListener("input", () =>
      handlers.onParamEdit(input.dataset.param!, input.value));
  }
  root.querySelector("[data-testid=run-button]")
    ?.addEventListener("click", () => handlers.onRunOrStop());
  root.querySelector("[data-testid=details-button]")
    ?.addEventListener("click", () => handlers.onShowDetails());
}
