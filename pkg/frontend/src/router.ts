// URL state: every view is reconstructable from the hash fragment, so
// links are shareable and the back button works without a server.
//
//   #/                      home (empty search)
//   #/search?q=<query>      search results
//   #/topic/<id>?q=<query>  topic detail (q preserved for "back to results")

export interface RouteState {
  topicId: number | null;
  query: string;
}

export function parseRoute(hash: string): RouteState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [path, queryString = ""] = raw.split("?", 2);
  const params = new URLSearchParams(queryString);
  const query = params.get("q") ?? "";
  const topicMatch = /^\/topic\/(\d+)$/.exec(path);
  if (topicMatch) {
    return { topicId: Number(topicMatch[1]), query };
  }
  return { topicId: null, query };
}

export function formatRoute(state: RouteState): string {
  const params = new URLSearchParams();
  if (state.query) params.set("q", state.query);
  const suffix = params.toString() ? `?${params.toString()}` : "";
  if (state.topicId !== null) {
    return `#/topic/${state.topicId}${suffix}`;
  }
  return state.query ? `#/search${suffix}` : "#/";
}

export type RouteListener = (state: RouteState) => void;

export class Router {
  constructor(private readonly win: Window) {}

  current(): RouteState {
    return parseRoute(this.win.location.hash);
  }

  navigate(state: RouteState): void {
    const target = formatRoute(state);
    if (this.win.location.hash === target) return;
    this.win.location.hash = target; // fires hashchange
  }

  /** Subscribe to route changes; returns an unsubscribe function. */
  onChange(listener: RouteListener): () => void {
    const handler = () => listener(this.current());
    this.win.addEventListener("hashchange", handler);
    return () => this.win.removeEventListener("hashchange", handler);
  }
}
