import { escapeAttr, escapeHtml } from "./html.js";
import { PAGES, type AppState } from "./state.js";
import type { AdviceJson, TableJson, TermJson, TraceJson, TripleJson } from "./types.js";

/** Last IRI segment, for IRIs the knowledge base gives no display name. */
function localName(iri: string): string {
  const hash = iri.lastIndexOf("#");
  if (hash >= 0 && hash < iri.length - 1) return iri.slice(hash + 1);
  const slash = iri.lastIndexOf("/");
  return slash >= 0 ? iri.slice(slash + 1) : iri;
}

/** A term as a labeled span; IRIs show their name with the full IRI as tooltip. */
export function renderTerm(term: TermJson, names: Record<string, string> = {}): string {
  if (term.kind === "IRI") {
    const label = names[term.text] ?? localName(term.text);
    return `<span class="term term-iri" title="${escapeAttr(term.text)}">${escapeHtml(label)}</span>`;
  }
  return `<span class="term term-literal">${escapeHtml(term.text)}</span>`;
}

export function renderTable(table: TableJson, emptyText = "No results."): string {
  if (table.rows.length === 0) {
    return `<p class="empty-state">${escapeHtml(emptyText)}</p>`;
  }
  const names = table.names ?? {};
  const head = table.columns
    .map((column) => `<th>${escapeHtml(column)}</th>`)
    .join("");
  const body = table.rows
    .map((row) => `<tr>${row.map((term) => `<td>${renderTerm(term, names)}</td>`).join("")}</tr>`)
    .join("");
  return `<table class="result-table"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

function renderTriple(triple: TripleJson, names: Record<string, string>): string {
  return [triple.subject, triple.predicate, triple.object]
    .map((term) => renderTerm(term, names))
    .join(" ");
}

function renderTraceNode(trace: TraceJson, names: Record<string, string>): string {
  const fact = renderTriple(trace.triple, names);
  if (trace.rule === undefined) {
    return `<li class="trace-leaf">${fact} <span class="trace-origin">(asserted)</span></li>`;
  }
  const premises = (trace.premises ?? [])
    .map((premise) => renderTraceNode(premise, names))
    .join("");
  return `<li class="trace-step">${fact} <span class="trace-origin">by rule <b>${escapeHtml(trace.rule)}</b></span><ul>${premises}</ul></li>`;
}

export function renderTraces(advice: AdviceJson, names: Record<string, string>): string {
  if (advice.traces.length === 0) {
    return `<p class="empty-state">No derivation recorded.</p>`;
  }
  const items = advice.traces.map((trace) => renderTraceNode(trace, names)).join("");
  return `<ul class="trace-tree">${items}</ul>`;
}

function renderNav(state: AppState): string {
  const items = PAGES.map(({ id, label }) => {
    const active = state.page === id ? " active" : "";
    const needsReport = id === "results" && state.report === null;
    const disabled = needsReport ? " disabled" : "";
    const title = needsReport ? ' title="Calculate a result first"' : "";
    return `<button class="nav-tab${active}" data-action="nav" data-page="${id}"${disabled}${title}>${escapeHtml(label)}</button>`;
  });
  return `<nav class="nav">${items.join("")}</nav>`;
}

function renderWelcome(state: AppState): string {
  const ready = !state.loading && state.loadError === null;
  return `<section class="page">
    <h1>Agile practice advisor</h1>
    <p>This tool helps a team decide which agile practices fit its goals
    and its situation. Browse what the knowledge base knows about each
    practice, or describe your team and calculate a recommendation with
    a full explanation of every suggestion.</p>
    <ol class="steps">
      <li><b>Explore</b> the practices, their goals, problems, and solutions.</li>
      <li>Pick the <b>goals</b> your team cares about.</li>
      <li>Describe the <b>team situation</b> with the situational factors.</li>
      <li>Press <b>Calculate result</b> and inspect why each practice was suggested.</li>
    </ol>
    ${state.loadError !== null ? `<div class="banner banner-error">${escapeHtml(state.loadError)}</div>` : ""}
    ${state.loading ? `<p class="loading">Loading the knowledge base…</p>` : ""}
    <p>
      <button class="primary" data-action="nav" data-page="inputGoals"${ready ? "" : " disabled"}>Start: choose goals</button>
      <button data-action="nav" data-page="allInfo"${ready ? "" : " disabled"}>Explore the knowledge base</button>
    </p>
  </section>`;
}

function renderAllInfo(state: AppState): string {
  const concernOptions = state.concerns
    .filter((concern) => !concern.teamScoped)
    .map((concern) => {
      const selected = concern.id === state.selectedConcern ? " selected" : "";
      return `<option value="${escapeAttr(concern.id)}"${selected}>${escapeHtml(concern.title)}</option>`;
    })
    .join("");
  const active = state.concerns.find((concern) => concern.id === state.selectedConcern);

  let practicePicker = "";
  if (active?.requiresPractice) {
    const names = state.practices?.names ?? {};
    const options = (state.practices?.rows ?? [])
      .map((row) => row[0])
      .filter((term): term is TermJson => term !== undefined && term.kind === "IRI")
      .map((term) => {
        const selected = term.text === state.selectedPractice ? " selected" : "";
        const label = names[term.text] ?? localName(term.text);
        return `<option value="${escapeAttr(term.text)}"${selected}>${escapeHtml(label)}</option>`;
      })
      .join("");
    practicePicker = `<label class="field">For practice
      <select data-action="select-practice">
        <option value="">— pick a practice —</option>${options}
      </select>
    </label>`;
  }

  let resultBlock = "";
  if (state.concernLoading) {
    resultBlock = `<p class="loading">Loading…</p>`;
  } else if (state.concernError !== null) {
    resultBlock = `<div class="banner banner-error">${escapeHtml(state.concernError)}</div>`;
  } else if (state.concernTable !== null) {
    resultBlock = renderTable(state.concernTable);
  }

  return `<section class="page">
    <h2>Explore the knowledge base</h2>
    <p>${escapeHtml(active?.description ?? "Pick a concern to see what the knowledge base can answer.")}</p>
    <label class="field">Concern
      <select data-action="select-concern">
        <option value="">— pick a concern —</option>${concernOptions}
      </select>
    </label>
    ${practicePicker}
    ${resultBlock}
  </section>`;
}

function renderGoalForm(state: AppState): string {
  const goals = state.catalog?.goals ?? [];
  const groups: { kind: "goal" | "principle"; heading: string }[] = [
    { kind: "goal", heading: "Goals" },
    { kind: "principle", heading: "Principles" },
  ];
  const lists = groups
    .map(({ kind, heading }) => {
      const boxes = goals
        .filter((goal) => goal.kind === kind)
        .map((goal) => {
          const checked = state.goals.has(goal.iri) ? " checked" : "";
          return `<label class="check"><input type="checkbox" data-action="toggle-goal" data-iri="${escapeAttr(goal.iri)}"${checked}> ${escapeHtml(goal.name)}</label>`;
        })
        .join("");
      return `<fieldset><legend>${heading}</legend>${boxes}</fieldset>`;
    })
    .join("");
  return `<section class="page">
    <h2>What does your team want to achieve?</h2>
    ${lists}
    ${renderCalculateControls(state)}
    <p><button data-action="nav" data-page="inputSituations">Next: describe the team situation</button></p>
  </section>`;
}

function renderSituationForm(state: AppState): string {
  const factors = state.catalog?.factors ?? [];
  const rows = factors
    .map((factor) => {
      const chosen = state.situations.get(factor.id) ?? "";
      const options = factor.values
        .map((value) => {
          const selected = value.iri === chosen ? " selected" : "";
          return `<option value="${escapeAttr(value.iri)}"${selected}>${escapeHtml(value.name)}</option>`;
        })
        .join("");
      return `<label class="field">${escapeHtml(factor.title)}
        <select data-action="set-situation" data-factor="${escapeAttr(factor.id)}">
          <option value="">— not specified —</option>${options}
        </select>
      </label>`;
    })
    .join("");
  return `<section class="page">
    <h2>What is your team like?</h2>
    <p>Leave a factor unspecified when it does not apply or you are unsure.</p>
    ${rows}
    ${renderCalculateControls(state)}
  </section>`;
}

function renderCalculateControls(state: AppState): string {
  const busy = state.pending;
  const error = state.reportError;
  return `<div class="calculate">
    <button class="primary" data-action="calculate"${busy ? " disabled" : ""}>
      ${busy ? "Calculating…" : "Calculate result"}
    </button>
    ${
      error !== null
        ? `<div class="banner banner-error">${escapeHtml(error.message)}${
            error.retryable
              ? ` <button data-action="retry-calculate">Retry</button>`
              : ""
          }</div>`
        : ""
    }
  </div>`;
}

function renderAdviceTable(
  heading: string,
  kind: "rec" | "dis",
  advices: AdviceJson[],
  state: AppState,
  names: Record<string, string>,
  flagged: Set<string>,
): string {
  if (advices.length === 0) {
    return `<h3>${escapeHtml(heading)}</h3><p class="empty-state">None for this profile.</p>`;
  }
  const rows = advices
    .map((advice) => {
      const key = `${kind}:${advice.practice}`;
      const open = state.expanded.has(key);
      const label = advice.name ?? localName(advice.practice);
      const flag = flagged.has(advice.practice)
        ? ` <span class="flag" title="This practice is both recommended and discouraged for this profile">recommended &amp; discouraged</span>`
        : "";
      const detail = open
        ? `<tr class="detail-row"><td>${renderTraces(advice, names)}</td></tr>`
        : "";
      return `<tr class="advice-row">
        <td><button class="expander" data-action="toggle-trace" data-key="${escapeAttr(key)}">${open ? "▾" : "▸"}</button>
        <span class="term term-iri" title="${escapeAttr(advice.practice)}">${escapeHtml(label)}</span>${flag}</td>
      </tr>${detail}`;
    })
    .join("");
  return `<h3>${escapeHtml(heading)}</h3><table class="advice-table" data-advice="${kind}"><tbody>${rows}</tbody></table>`;
}

function renderResults(state: AppState): string {
  const report = state.report;
  if (report === null) {
    return `<section class="page">
      <h2>Results</h2>
      <p class="empty-state">No recommendation yet. Pick goals or situations and press Calculate result.</p>
    </section>`;
  }
  const names: Record<string, string> = {};
  for (const advice of [...report.recommended, ...report.discouraged]) {
    if (advice.name !== null) names[advice.practice] = advice.name;
  }
  for (const table of Object.values(report.concernResults)) {
    Object.assign(names, table.names ?? {});
  }
  const recommendedSet = new Set(report.recommended.map((advice) => advice.practice));
  const flagged = new Set(
    report.discouraged.map((advice) => advice.practice).filter((iri) => recommendedSet.has(iri)),
  );

  const concernIds = Object.keys(report.concernResults);
  const options = concernIds
    .map((id) => {
      const selected = id === state.resultsConcern ? " selected" : "";
      return `<option value="${escapeAttr(id)}"${selected}>${escapeHtml(id)}</option>`;
    })
    .join("");
  const chosenTable =
    state.resultsConcern !== "" ? report.concernResults[state.resultsConcern] : undefined;

  return `<section class="page">
    <h2>Results</h2>
    ${renderAdviceTable("Recommended practices", "rec", report.recommended, state, names, flagged)}
    ${renderAdviceTable("Discouraged practices", "dis", report.discouraged, state, names, flagged)}
    <h3>More about the recommended practices</h3>
    <label class="field">Concern
      <select data-action="select-results-concern">
        <option value="">— pick a concern —</option>${options}
      </select>
    </label>
    ${chosenTable !== undefined ? renderTable(chosenTable) : ""}
  </section>`;
}

export function renderApp(state: AppState): string {
  let page: string;
  switch (state.page) {
    case "welcome":
      page = renderWelcome(state);
      break;
    case "allInfo":
      page = renderAllInfo(state);
      break;
    case "inputGoals":
      page = renderGoalForm(state);
      break;
    case "inputSituations":
      page = renderSituationForm(state);
      break;
    case "results":
      page = renderResults(state);
      break;
  }
  return `${renderNav(state)}<main>${page}</main>`;
}
