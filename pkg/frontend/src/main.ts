// Application shell: wires the router, API client and views together.
// All view state lives in the URL hash; each data channel (results,
// topic, graph) discards stale responses via a sequence guard.

import {
  ApiError,
  fetchGraph,
  fetchTopic,
  searchTopics,
  SequenceGuard,
} from "./api";
import { Router, type RouteState } from "./router";
import {
  renderGraph,
  renderMessage,
  renderResults,
  renderTopicDetail,
} from "./views";

export interface AppElements {
  form: HTMLFormElement;
  input: HTMLInputElement;
  results: HTMLElement;
  detail: HTMLElement;
  graph: HTMLElement;
}

export class App {
  private readonly router: Router;
  private readonly searchSeq = new SequenceGuard();
  private readonly topicSeq = new SequenceGuard();
  private readonly graphSeq = new SequenceGuard();
  private readonly unsubscribe: () => void;

  constructor(
    private readonly elements: AppElements,
    win: Window = window,
  ) {
    this.router = new Router(win);
    this.elements.form.addEventListener("submit", (event) => {
      event.preventDefault();
      const query = this.elements.input.value.trim();
      if (!query) return; // input validation: no request for empty queries
      this.router.navigate({ topicId: null, query });
    });
    this.unsubscribe = this.router.onChange((state) => void this.apply(state));
  }

  dispose(): void {
    this.unsubscribe();
  }

  start(): Promise<void> {
    return this.apply(this.router.current());
  }

  openTopic(id: number): void {
    this.router.navigate({ topicId: id, query: this.router.current().query });
  }

  async apply(state: RouteState): Promise<void> {
    this.elements.input.value = state.query;
    const tasks: Promise<void>[] = [];
    if (state.query) {
      tasks.push(this.loadResults(state.query));
    } else {
      this.elements.results.replaceChildren();
    }
    if (state.topicId !== null) {
      tasks.push(this.loadTopic(state.topicId));
      tasks.push(this.loadGraph(state.topicId));
    } else {
      this.elements.detail.replaceChildren();
      this.elements.graph.replaceChildren();
    }
    await Promise.all(tasks);
  }

  private async loadResults(query: string): Promise<void> {
    const ticket = this.searchSeq.issue();
    this.elements.results.replaceChildren(renderMessage("loading", "Searching…"));
    try {
      const hits = await searchTopics(query);
      if (!this.searchSeq.isCurrent(ticket)) return;
      this.elements.results.replaceChildren(
        renderResults(hits, (id) => this.openTopic(id)),
      );
    } catch (err) {
      if (!this.searchSeq.isCurrent(ticket)) return;
      this.elements.results.replaceChildren(this.errorView(err));
    }
  }

  private async loadTopic(id: number): Promise<void> {
    const ticket = this.topicSeq.issue();
    this.elements.detail.replaceChildren(renderMessage("loading", "Loading topic…"));
    try {
      const topic = await fetchTopic(id);
      if (!this.topicSeq.isCurrent(ticket)) return;
      this.elements.detail.replaceChildren(renderTopicDetail(topic));
    } catch (err) {
      if (!this.topicSeq.isCurrent(ticket)) return;
      if (err instanceof ApiError && err.status === 404) {
        this.elements.detail.replaceChildren(
          renderMessage("error", `Topic ${id} not found.`),
        );
      } else {
        this.elements.detail.replaceChildren(this.errorView(err));
      }
    }
  }

  private async loadGraph(id: number): Promise<void> {
    const ticket = this.graphSeq.issue();
    try {
      const graph = await fetchGraph(id, 2);
      if (!this.graphSeq.isCurrent(ticket)) return;
      this.elements.graph.replaceChildren(
        renderGraph(graph, id, (node) => this.openTopic(node)),
      );
    } catch (err) {
      if (!this.graphSeq.isCurrent(ticket)) return;
      this.elements.graph.replaceChildren(this.errorView(err));
    }
  }

  private errorView(err: unknown): HTMLElement {
    const message =
      err instanceof ApiError ? err.message : "Unexpected error; see console.";
    if (!(err instanceof ApiError)) console.error(err);
    return renderMessage("error", message);
  }
}

export function mount(doc: Document, win: Window = window): App {
  const elements: AppElements = {
    form: doc.querySelector("#search-form") as HTMLFormElement,
    input: doc.querySelector("#search-input") as HTMLInputElement,
    results: doc.querySelector("#results") as HTMLElement,
    detail: doc.querySelector("#detail") as HTMLElement,
    graph: doc.querySelector("#graph") as HTMLElement,
  };
  const app = new App(elements, win);
  void app.start();
  return app;
}

if (typeof document !== "undefined" && document.querySelector("#search-form")) {
  mount(document);
}
