/** Wire types for the /api/v1 JSON contract. */

export interface TermJson {
  kind: "IRI" | "Literal";
  text: string;
  datatype?: string;
}

export interface TableJson {
  columns: string[];
  rows: TermJson[][];
  /** Display names for IRIs appearing in the rows. */
  names?: Record<string, string>;
}

export interface ConcernJson {
  id: string;
  title: string;
  description: string;
  teamScoped: boolean;
  requiresPractice: boolean;
}

export interface TripleJson {
  subject: TermJson;
  predicate: TermJson;
  object: TermJson;
}

export interface TraceJson {
  triple: TripleJson;
  /** Absent on asserted leaves. */
  rule?: string;
  premises?: TraceJson[];
}

export interface AdviceJson {
  practice: string;
  name: string | null;
  traces: TraceJson[];
}

export interface ReportJson {
  teamIri: string;
  recommended: AdviceJson[];
  discouraged: AdviceJson[];
  concernResults: Record<string, TableJson>;
}

export interface GoalJson {
  iri: string;
  id: string;
  name: string;
  kind: "goal" | "principle";
}

export interface FactorValueJson {
  iri: string;
  id: string;
  name: string;
}

export interface FactorJson {
  iri: string;
  id: string;
  title: string;
  values: FactorValueJson[];
}

export interface CatalogJson {
  goals: GoalJson[];
  factors: FactorJson[];
}

export interface ProfileBody {
  goals: string[];
  situations: Record<string, string>;
}

export interface ApiErrorJson {
  status: number;
  code: string;
  message: string;
  details?: string[];
}
