import type { AlgorithmInfo, RunSnapshot, RunSpec, StoredDataset } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function raiseForStatus(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response;
}

/** Thin typed client; concurrent GETs to the same endpoint share one request. */
export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(
    private base = "",
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private getJson<T>(path: string): Promise<T> {
    const pending = this.inflight.get(path);
    if (pending) return pending as Promise<T>;
    const request = this.fetchFn(this.base + path)
      .then(raiseForStatus)
      .then((r) => r.json() as Promise<T>)
      .finally(() => this.inflight.delete(path));
    this.inflight.set(path, request);
    return request;
  }

  algorithms(): Promise<AlgorithmInfo[]> {
    return this.getJson("/api/algorithms");
  }

  async uploadDataset(filename: string, content: string): Promise<StoredDataset> {
    const response = await this.fetchFn(
      `${this.base}/api/datasets?filename=${encodeURIComponent(filename)}`,
      { method: "POST", body: content },
    );
    return (await raiseForStatus(response)).json();
  }

  async startRun(datasetId: string, spec: RunSpec): Promise<{ run_id: string }> {
    const response = await this.fetchFn(`${this.base}/api/runs`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ dataset_id: datasetId, spec }),
    });
    return (await raiseForStatus(response)).json();
  }

  pollRun(runId: string): Promise<RunSnapshot> {
    return this.getJson(`/api/runs/${runId}`);
  }

  async cancelRun(runId: string): Promise<RunSnapshot> {
    const response = await this.fetchFn(`${this.base}/api/runs/${runId}`, {
      method: "DELETE",
    });
    return (await raiseForStatus(response)).json();
  }
}
