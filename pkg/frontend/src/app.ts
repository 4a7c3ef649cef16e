import { ApiClient, ApiError } from "./api.js";
import { renderApp } from "./render.js";
import { initialState, type AppState, type PageId } from "./state.js";
import type { ProfileBody } from "./types.js";

const PAGE_IDS: ReadonlySet<string> = new Set([
  "welcome",
  "allInfo",
  "inputGoals",
  "inputSituations",
  "results",
]);

/** The request body for the current form selections. */
export function profileFromState(state: AppState): ProfileBody {
  const situations: Record<string, string> = {};
  for (const [factorId, valueIri] of state.situations) {
    if (valueIri !== "") situations[factorId] = valueIri;
  }
  return { goals: [...state.goals], situations };
}

export interface App {
  state: AppState;
  rerender: () => void;
  boot: () => Promise<void>;
  calculate: () => Promise<void>;
}

/**
 * Wire the UI into a root element.
 *
 * All state lives in `state`; the DOM is replaced wholesale on every
 * change, so forms keep their values across page switches because the
 * values are re-rendered from state, not kept in the DOM.
 */
export function createApp(root: HTMLElement, api: ApiClient): App {
  const state = initialState();

  function rerender(): void {
    root.innerHTML = renderApp(state);
  }

  async function boot(): Promise<void> {
    state.loading = true;
    rerender();
    try {
      const [concerns, catalog, practices] = await Promise.all([
        api.listConcerns(),
        api.catalog(),
        api.concernResults("practices-overview"),
      ]);
      state.concerns = concerns;
      state.catalog = catalog;
      state.practices = practices;
      state.loadError = null;
    } catch (error) {
      state.loadError =
        error instanceof ApiError
          ? `The knowledge base is not reachable: ${error.message}`
          : "The knowledge base is not reachable.";
    }
    state.loading = false;
    rerender();
  }

  async function showConcern(): Promise<void> {
    state.concernTable = null;
    state.concernError = null;
    const concern = state.concerns.find((entry) => entry.id === state.selectedConcern);
    if (concern === undefined) {
      rerender();
      return;
    }
    if (concern.requiresPractice && state.selectedPractice === "") {
      rerender();
      return;
    }
    state.concernLoading = true;
    rerender();
    try {
      state.concernTable = await api.concernResults(
        concern.id,
        concern.requiresPractice ? state.selectedPractice : undefined,
      );
    } catch (error) {
      state.concernError = error instanceof ApiError ? error.message : String(error);
    }
    state.concernLoading = false;
    rerender();
  }

  async function calculate(): Promise<void> {
    if (state.pending) return;
    state.pending = true;
    state.reportError = null;
    rerender();
    try {
      state.report = await api.recommend(profileFromState(state));
      state.expanded.clear();
      state.resultsConcern = "";
      state.page = "results";
    } catch (error) {
      if (error instanceof ApiError) {
        state.reportError = { message: error.message, retryable: error.retryable };
      } else {
        state.reportError = { message: String(error), retryable: false };
      }
    }
    state.pending = false;
    rerender();
  }

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (target === null || !root.contains(target)) return;
    const action = target.dataset["action"];
    switch (action) {
      case "nav": {
        const page = target.dataset["page"] ?? "";
        if (PAGE_IDS.has(page)) {
          state.page = page as PageId;
          rerender();
        }
        break;
      }
      case "toggle-goal": {
        const iri = target.dataset["iri"] ?? "";
        if (iri === "") break;
        if (state.goals.has(iri)) state.goals.delete(iri);
        else state.goals.add(iri);
        rerender();
        break;
      }
      case "calculate":
      case "retry-calculate":
        void calculate();
        break;
      case "toggle-trace": {
        const key = target.dataset["key"] ?? "";
        if (key === "") break;
        if (state.expanded.has(key)) state.expanded.delete(key);
        else state.expanded.add(key);
        rerender();
        break;
      }
      default:
        break;
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset["action"];
    switch (action) {
      case "select-concern":
        state.selectedConcern = (target as HTMLSelectElement).value;
        state.selectedPractice = "";
        void showConcern();
        break;
      case "select-practice":
        state.selectedPractice = (target as HTMLSelectElement).value;
        void showConcern();
        break;
      case "set-situation": {
        const factorId = target.dataset["factor"] ?? "";
        const value = (target as HTMLSelectElement).value;
        if (factorId === "") break;
        if (value === "") state.situations.delete(factorId);
        else state.situations.set(factorId, value);
        rerender();
        break;
      }
      case "select-results-concern":
        state.resultsConcern = (target as HTMLSelectElement).value;
        rerender();
        break;
      default:
        break;
    }
  });

  rerender();
  return { state, rerender, boot, calculate };
}
