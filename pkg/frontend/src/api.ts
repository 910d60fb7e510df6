import type {
  CoversJson,
  DatasetDetail,
  DatasetSummary,
  LayoutJson,
  MutationResponse,
  ProbeCreated,
  ProbeInfo,
  RevealJson,
} from "./types";

export class ConflictError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ConflictError";
  }
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function unwrap<T>(res: Response): Promise<T> {
  if (res.ok) return (await res.json()) as T;
  let detail = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.error === "string") detail = body.error;
  } catch {
    // non-JSON error body
  }
  if (res.status === 409) throw new ConflictError(detail);
  throw new ApiError(res.status, detail);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  listDatasets(): Promise<DatasetSummary[]> {
    return fetch(this.url("/datasets")).then((r) => unwrap(r));
  }

  createDataset(body: string, contentType = "text/plain"): Promise<DatasetSummary> {
    return fetch(this.url("/datasets"), {
      method: "POST",
      headers: { "content-type": contentType },
      body,
    }).then((r) => unwrap(r));
  }

  getDataset(id: string): Promise<DatasetDetail> {
    return fetch(this.url(`/datasets/${id}`)).then((r) => unwrap(r));
  }

  createProbe(datasetId: string): Promise<ProbeCreated> {
    return fetch(this.url(`/datasets/${datasetId}/probes`), { method: "POST" }).then(
      (r) => unwrap(r),
    );
  }

  getProbe(sessionId: string): Promise<ProbeInfo> {
    return fetch(this.url(`/probes/${sessionId}`)).then((r) => unwrap(r));
  }

  getLayout(sessionId: string): Promise<{ revision: number } & LayoutJson> {
    return fetch(this.url(`/probes/${sessionId}/layout`)).then((r) => unwrap(r));
  }

  private mutate(path: string, init: RequestInit, revision: number): Promise<MutationResponse> {
    return fetch(this.url(path), {
      ...init,
      headers: {
        "content-type": "application/json",
        "if-match": String(revision),
        ...(init.headers ?? {}),
      },
    }).then((r) => unwrap<MutationResponse>(r));
  }

  addObject(sessionId: string, object: string, revision: number): Promise<MutationResponse> {
    return this.mutate(
      `/probes/${sessionId}/objects`,
      { method: "POST", body: JSON.stringify({ object }) },
      revision,
    );
  }

  removeObject(sessionId: string, name: string, revision: number): Promise<MutationResponse> {
    return this.mutate(
      `/probes/${sessionId}/objects/${encodeURIComponent(name)}`,
      { method: "DELETE" },
      revision,
    );
  }

  clearProbe(sessionId: string, revision: number): Promise<MutationResponse> {
    return this.mutate(`/probes/${sessionId}/clear`, { method: "POST" }, revision);
  }

  setWeight(
    sessionId: string,
    object: string,
    weight: string,
    revision: number,
  ): Promise<MutationResponse> {
    return this.mutate(
      `/probes/${sessionId}/weights`,
      { method: "PUT", body: JSON.stringify({ object, weight }) },
      revision,
    );
  }

  addGroup(sessionId: string, groupId: number, revision: number): Promise<MutationResponse> {
    return this.mutate(
      `/probes/${sessionId}/add-group`,
      { method: "POST", body: JSON.stringify({ groupId }) },
      revision,
    );
  }

  reveal(sessionId: string, groupId: number): Promise<RevealJson> {
    return fetch(this.url(`/probes/${sessionId}/reveal?group=${groupId}`)).then((r) =>
      unwrap(r),
    );
  }

  covers(sessionId: string, maxSize: number, maxResults: number): Promise<CoversJson> {
    return fetch(
      this.url(`/probes/${sessionId}/covers?maxSize=${maxSize}&maxResults=${maxResults}`),
    ).then((r) => unwrap(r));
  }
}
