// Serializes query-builder form state into DSL text. The server parser is
// the single authority on validity; this module only does the mechanical
// assembly, so every builder state round-trips through POST /api/queries.

export interface SelectorState {
  kind: 'attr' | 'nodes';
  attribute?: string;
  values: string[]; // one value -> `=`, several -> `IN (...)`
}

export interface ConstraintState {
  subject: 'edge' | 'intermediate' | 'node';
  attribute: string;
  op: '=' | '!=' | '<' | '<=' | '>' | '>=';
  value: string;
}

export interface BuilderState {
  maxLength: number;
  lengthOp: '<=' | '=';
  from: SelectorState;
  to: SelectorState;
  mode: 'SIMPLE' | 'WALK';
  constraints: ConstraintState[];
}

function quote(v: string): string {
  return `"${v.replace(/"/g, '\\"')}"`;
}

function literal(v: string): string {
  // bare numbers stay numeric so quantitative comparisons type-check
  return /^-?\d+(\.\d+)?$/.test(v) ? v : quote(v);
}

function selector(s: SelectorState): string | null {
  const values = s.values.map((v) => v.trim()).filter((v) => v !== '');
  if (values.length === 0) return null;
  if (s.kind === 'nodes') {
    return `NODES(${values.map(quote).join(', ')})`;
  }
  if (!s.attribute) return null;
  if (values.length === 1) return `${s.attribute} = ${literal(values[0])}`;
  return `${s.attribute} IN (${values.map(literal).join(', ')})`;
}

/** DSL text for the current form, or null while the form is incomplete
 * (submit stays disabled on null). */
export function buildDsl(state: BuilderState): string | null {
  if (!Number.isInteger(state.maxLength) || state.maxLength < 1) return null;
  const from = selector(state.from);
  const to = selector(state.to);
  if (from === null || to === null) return null;
  let dsl = `PATHS LENGTH ${state.lengthOp} ${state.maxLength} FROM ${from} TO ${to}`;
  if (state.mode !== 'SIMPLE') dsl += ` MODE ${state.mode}`;
  const conds = state.constraints
    .filter((c) => c.attribute.trim() !== '' && c.value.trim() !== '')
    .map((c) => `${c.subject}.${c.attribute.trim()} ${c.op} ${literal(c.value.trim())}`);
  if (conds.length > 0) dsl += ` WHERE ${conds.join(' AND ')}`;
  return dsl;
}
