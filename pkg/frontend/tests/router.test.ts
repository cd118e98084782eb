import { describe, expect, it } from "vitest";

import { formatRoute, parseRoute } from "../src/router";

describe("parseRoute", () => {
  it("parses the empty hash as home", () => {
    expect(parseRoute("")).toEqual({ topicId: null, query: "" });
    expect(parseRoute("#/")).toEqual({ topicId: null, query: "" });
  });

  it("parses a search route", () => {
    expect(parseRoute("#/search?q=rey+OR+emir")).toEqual({
      topicId: null,
      query: "rey OR emir",
    });
  });

  it("parses a topic route with preserved query", () => {
    expect(parseRoute("#/topic/98?q=Abd")).toEqual({ topicId: 98, query: "Abd" });
  });

  it("treats a malformed topic id as home", () => {
    expect(parseRoute("#/topic/abc")).toEqual({ topicId: null, query: "" });
  });

  it("decodes url-encoded queries", () => {
    expect(parseRoute("#/search?q=Albarrac%C3%ADn").query).toBe("Albarracín");
  });
});

describe("formatRoute", () => {
  it("round-trips every state", () => {
    const states = [
      { topicId: null, query: "" },
      { topicId: null, query: "taifa Albarracín" },
      { topicId: 98, query: "" },
      { topicId: 98, query: 'rey "Abd al-Malik"' },
    ];
    for (const state of states) {
      expect(parseRoute(formatRoute(state))).toEqual(state);
    }
  });

  it("produces shareable hash fragments", () => {
    expect(formatRoute({ topicId: 98, query: "Abd" })).toBe("#/topic/98?q=Abd");
    expect(formatRoute({ topicId: null, query: "" })).toBe("#/");
  });
});
