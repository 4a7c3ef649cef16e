import type {
  CatalogJson,
  ConcernJson,
  ReportJson,
  TableJson,
  TermJson,
} from "../src/types.js";
import type { FetchLike } from "../src/api.js";

export const NS = "http://obama.kb/onto#";

export function iri(text: string): TermJson {
  return { kind: "IRI", text };
}

export function lit(text: string): TermJson {
  return { kind: "Literal", text };
}

export function jsonResponse(body: unknown, status = 200, headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json", ...headers },
  });
}

export interface RecordedCall {
  url: string;
  method: string;
  body: string | null;
}

/** A scripted fetch: exact-URL routes for GETs, one handler for POSTs. */
export class FakeApi {
  calls: RecordedCall[] = [];
  routes = new Map<string, () => Response>();
  postHandler: (body: string) => Response = () =>
    jsonResponse({ status: 500, code: "internal", message: "no POST handler" }, 500);

  get fetch(): FetchLike {
    return (input, init) => {
      const method = init?.method ?? "GET";
      const body = typeof init?.body === "string" ? init.body : null;
      this.calls.push({ url: input, method, body });
      if (method === "POST") {
        return Promise.resolve(this.postHandler(body ?? ""));
      }
      const route = this.routes.get(input);
      if (route === undefined) {
        return Promise.resolve(
          jsonResponse({ status: 404, code: "unknown_concern", message: `no route ${input}` }, 404),
        );
      }
      return Promise.resolve(route());
    };
  }

  posts(): RecordedCall[] {
    return this.calls.filter((call) => call.method === "POST");
  }
}

export const CONCERNS: ConcernJson[] = [
  {
    id: "practices-overview",
    title: "Practices overview",
    description: "Every practice in the knowledge base with its display name.",
    teamScoped: false,
    requiresPractice: false,
  },
  {
    id: "goals-of-practice",
    title: "Goals of a practice",
    description: "Goals and principles a given practice helps achieve.",
    teamScoped: false,
    requiresPractice: true,
  },
  {
    id: "recommended-for-team",
    title: "Recommended practices (team)",
    description: "Practices recommended for the current team.",
    teamScoped: true,
    requiresPractice: false,
  },
];

export const PRACTICES_TABLE: TableJson = {
  columns: ["practice", "name"],
  rows: [
    [iri(NS + "DailyMeetings"), lit("Daily meetings")],
    [iri(NS + "PairProgramming"), lit("Pair programming")],
  ],
  names: { [NS + "DailyMeetings"]: "Daily meetings", [NS + "PairProgramming"]: "Pair programming" },
};

export const CATALOG: CatalogJson = {
  goals: [
    { iri: NS + "Communication_Goal", id: "communication-goal", name: "Communication", kind: "goal" },
    { iri: NS + "Quality_Goal", id: "quality-goal", name: "Quality", kind: "goal" },
    { iri: NS + "Simplicity", id: "simplicity", name: "Simplicity", kind: "principle" },
  ],
  factors: [
    {
      iri: NS + "TeamDistribution",
      id: "team-distribution",
      title: "Team distribution",
      values: [
        { iri: NS + "Distributed_Team", id: "distributed-team", name: "Distributed team" },
        { iri: NS + "CoLocated_Team", id: "co-located-team", name: "Co-located team" },
      ],
    },
    {
      iri: NS + "TeamSize",
      id: "team-size",
      title: "Team size",
      values: [
        { iri: NS + "Small_Team", id: "small-team", name: "Small team" },
        { iri: NS + "Large_Team", id: "large-team", name: "Large team" },
      ],
    },
  ],
};

export function sampleReport(): ReportJson {
  const team = iri(NS + "Team");
  const daily = iri(NS + "DailyMeetings");
  const goal = iri(NS + "Communication_Goal");
  return {
    teamIri: NS + "Team",
    recommended: [
      {
        practice: NS + "DailyMeetings",
        name: "Daily meetings",
        traces: [
          {
            triple: { subject: daily, predicate: iri(NS + "recommendedFor"), object: team },
            rule: "R4",
            premises: [
              { triple: { subject: team, predicate: iri(NS + "desiresGoal"), object: goal } },
              { triple: { subject: daily, predicate: iri(NS + "achieve"), object: goal } },
            ],
          },
        ],
      },
      {
        practice: NS + "PairProgramming",
        name: "Pair programming",
        traces: [],
      },
    ],
    discouraged: [
      {
        practice: NS + "DailyMeetings",
        name: "Daily meetings",
        traces: [
          {
            triple: { subject: daily, predicate: iri(NS + "discouragedFor"), object: team },
            rule: "R5",
            premises: [
              { triple: { subject: daily, predicate: iri(NS + "requires"), object: iri(NS + "Collocation") } },
            ],
          },
        ],
      },
    ],
    concernResults: {
      "recommended-for-team": {
        columns: ["practice"],
        rows: [[daily], [iri(NS + "PairProgramming")]],
        names: { [NS + "DailyMeetings"]: "Daily meetings" },
      },
    },
  };
}

/** A FakeApi preloaded with the standard listing endpoints. */
export function standardApi(): FakeApi {
  const api = new FakeApi();
  api.routes.set("/api/v1/concerns", () => jsonResponse(CONCERNS));
  api.routes.set("/api/v1/catalog", () => jsonResponse(CATALOG));
  api.routes.set("/api/v1/concerns/practices-overview/results", () =>
    jsonResponse(PRACTICES_TABLE),
  );
  api.postHandler = () => jsonResponse(sampleReport());
  return api;
}

export function clickAction(root: HTMLElement, selector: string): void {
  const element = root.querySelector<HTMLElement>(selector);
  if (element === null) throw new Error(`no element for ${selector}`);
  element.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export function changeSelect(root: HTMLElement, selector: string, value: string): void {
  const element = root.querySelector<HTMLSelectElement>(selector);
  if (element === null) throw new Error(`no element for ${selector}`);
  element.value = value;
  element.dispatchEvent(new Event("change", { bubbles: true }));
}

/** Wait until queued promise callbacks (fetch mocks, rerenders) settle. */
export async function settle(): Promise<void> {
  for (let i = 0; i < 10; i += 1) {
    await Promise.resolve();
  }
}
