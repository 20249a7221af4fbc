/** In-memory stand-in for the run service, faithful to its JSON contract. */

import type { AlgorithmInfo, ResultDoc, RunSnapshot } from "../src/types.js";

export const STUB_CATALOG: AlgorithmInfo[] = [
  {
    id: "c45", family: "classifier",
    params: [
      { name: "confidence", kind: "float", default: 0.25, min: 1e-6, max: 0.5 },
      { name: "min_leaf", kind: "int", default: 2, min: 1 },
    ],
  },
  { id: "naivebayes", family: "classifier", params: [] },
  { id: "kmeans", family: "clusterer",
    params: [{ name: "k", kind: "int", default: 2, min: 1 }] },
];

export const STUB_RESULT: ResultDoc = {
  algorithm: "c45",
  params: { confidence: 0.25, min_leaf: 2 },
  dataset: { relation: "weather", instances: 14, attributes: 5 },
  accuracy: 92.4611,
  class_labels: ["yes", "no"],
  confusion: [[8, 1], [2, 3]],
  per_class: [
    { label: "yes", precision: 0.8, recall: 0.8889, f1: 0.8421 },
    { label: "no", precision: 0.75, recall: 0.6, f1: 0.6667 },
  ],
  build_time_s: 0.0123,
  cv_time_s: 0.1456,
  model_text: "outlook?\n  = sunny: no [0, 3]",
};

interface StubRun {
  snapshot: RunSnapshot;
  pollsLeft: number;
}

export function makeStubService(options: { runPolls?: number } = {}) {
  const runPolls = options.runPolls ?? 2;
  const datasets = new Map<string, string>();
  const runs = new Map<string, StubRun>();
  let counter = 0;
  const requests: string[] = [];

  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), {
      status, headers: { "content-type": "application/json" },
    });

  const fetchFn: typeof fetch = async (input, init) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    requests.push(`${method} ${path}`);

    if (method === "GET" && path === "/api/algorithms") {
      return json(STUB_CATALOG);
    }
    if (method === "POST" && path.startsWith("/api/datasets")) {
      const body = String(init?.body ?? "");
      if (!body.includes("@data")) {
        return json({ detail: "line 1: missing @data section" }, 422);
      }
      counter += 1;
      const id = `ds-${counter}`;
      datasets.set(id, body);
      return json({
        id,
        filename: decodeURIComponent(path.split("filename=")[1] ?? "upload.arff"),
        summary: {
          relation: "weather", instances: 14, attributes: 5,
          attribute_details: [
            { name: "outlook", kind: "nominal", distinct: 3, missing: 0 },
            { name: "temperature", kind: "nominal", distinct: 3, missing: 0 },
            { name: "humidity", kind: "nominal", distinct: 2, missing: 0 },
            { name: "windy", kind: "nominal", distinct: 2, missing: 0 },
            { name: "play", kind: "nominal", distinct: 2, missing: 0 },
          ],
          class_distribution: { yes: 9, no: 5 },
        },
      }, 201);
    }
    if (method === "POST" && path === "/api/runs") {
      const body = JSON.parse(String(init?.body));
      if (!datasets.has(body.dataset_id)) {
        return json({ detail: `unknown dataset '${body.dataset_id}'` }, 404);
      }
      counter += 1;
      const id = `run-${counter}`;
      runs.set(id, {
        snapshot: { id, algorithm: body.spec.algorithm, status: "running", progress: 0 },
        pollsLeft: runPolls,
      });
      return json({ run_id: id }, 202);
    }
    const runMatch = path.match(/^\/api\/runs\/([^/]+)$/);
    if (runMatch) {
      const run = runs.get(runMatch[1]);
      if (!run) return json({ detail: `unknown run '${runMatch[1]}'` }, 404);
      if (method === "DELETE") {
        if (run.snapshot.status === "running" || run.snapshot.status === "pending") {
          run.snapshot = { ...run.snapshot, status: "cancelled" };
        }
        return json(run.snapshot);
      }
      if (run.snapshot.status === "running") {
        run.pollsLeft -= 1;
        const done = run.pollsLeft <= 0;
        run.snapshot = done
          ? { ...run.snapshot, status: "done", progress: 1, result: STUB_RESULT }
          : { ...run.snapshot,
              progress: (runPolls - run.pollsLeft) / (runPolls + 1) };
      }
      return json(run.snapshot);
    }
    return json({ detail: `no route for ${method} ${path}` }, 404);
  };

  return { fetchFn, requests, runs };
}
