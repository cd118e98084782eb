// Typed client for the topic-map query service. Pure fetch wrapper plus
// a per-channel sequence guard so a slow response can never clobber the
// result of a newer request.

export interface SearchHit {
  id: number;
  score: number;
  name: string;
  snippet: string;
}

export interface DateFact {
  role: string;
  location: string | null;
  day: number | null;
  month: number | null;
  year: number;
}

export interface OccurrenceJson {
  roleSpec: string;
  resourceData: string;
}

export interface AssociationJson {
  source: number;
  target: number | string;
  role: string;
  direction: "one-way" | "two-way";
}

export interface TopicDetail {
  id: number;
  baseName: string;
  variants: string[];
  instanceOf: number;
  shortdesc: string;
  body: string;
  dateFacts: DateFact[];
  occurrences: OccurrenceJson[];
  associations: AssociationJson[];
}

export interface GraphNode {
  id: number;
  label: string;
  kind: string;
}

export interface GraphEdge {
  source: number;
  target: number;
  role: string;
  direction: "one-way" | "two-way";
}

export interface GraphExport {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url);
  } catch (err) {
    throw new ApiError(0, `service unreachable: ${String(err)}`);
  }
  const body = await resp.json().catch(() => null);
  if (!resp.ok) {
    const message =
      body && typeof body.error === "string" ? body.error : `HTTP ${resp.status}`;
    throw new ApiError(resp.status, message);
  }
  return body as T;
}

export function searchTopics(query: string, k = 10): Promise<SearchHit[]> {
  const params = new URLSearchParams({ q: query, k: String(k) });
  return getJson<SearchHit[]>(`/api/search?${params}`);
}

export function fetchTopic(id: number): Promise<TopicDetail> {
  return getJson<TopicDetail>(`/api/topic/${id}`);
}

export function fetchGraph(root: number, depth = 2): Promise<GraphExport> {
  const params = new URLSearchParams({ root: String(root), depth: String(depth) });
  return getJson<GraphExport>(`/api/graph?${params}`);
}

/**
 * At most one logical in-flight request per channel: each issue() bumps a
 * sequence number, and resolutions belonging to an older sequence are
 * reported as stale so the caller can discard them.
 */
export class SequenceGuard {
  private seq = 0;

  issue(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.seq;
  }
}
