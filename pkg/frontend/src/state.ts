import type { CatalogJson, ConcernJson, ReportJson, TableJson } from "./types.js";

export type PageId = "welcome" | "allInfo" | "inputGoals" | "inputSituations" | "results";

export const PAGES: { id: PageId; label: string }[] = [
  { id: "welcome", label: "Welcome" },
  { id: "allInfo", label: "Explore" },
  { id: "inputGoals", label: "Goals" },
  { id: "inputSituations", label: "Team situation" },
  { id: "results", label: "Results" },
];

/**
 * Whole-application state. Form selections live here rather than in the
 * DOM so they survive page switches; render functions are pure views of
 * this object.
 */
export interface AppState {
  page: PageId;
  loading: boolean;
  loadError: string | null;
  catalog: CatalogJson | null;
  concerns: ConcernJson[];
  /** practices-overview table, feeds the practice picker on the explore page. */
  practices: TableJson | null;

  selectedConcern: string;
  selectedPractice: string;
  concernTable: TableJson | null;
  concernError: string | null;
  concernLoading: boolean;

  /** Selected goal IRIs, in catalog order when posted. */
  goals: Set<string>;
  /** factor id -> selected value IRI. */
  situations: Map<string, string>;

  pending: boolean;
  report: ReportJson | null;
  reportError: { message: string; retryable: boolean } | null;
  resultsConcern: string;
  /** Expanded practice rows, keyed "rec:<iri>" / "dis:<iri>". */
  expanded: Set<string>;
}

export function initialState(): AppState {
  return {
    page: "welcome",
    loading: true,
    loadError: null,
    catalog: null,
    concerns: [],
    practices: null,
    selectedConcern: "",
    selectedPractice: "",
    concernTable: null,
    concernError: null,
    concernLoading: false,
    goals: new Set(),
    situations: new Map(),
    pending: false,
    report: null,
    reportError: null,
    resultsConcern: "",
    expanded: new Set(),
  };
}
