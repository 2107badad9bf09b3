// Query builder form: selector pickers with attribute-value autocomplete,
// max-length input, advanced constraint rows, and a raw-DSL escape hatch.
// The server parser is the validity authority; 400 responses are rendered
// inline with a caret at the reported column.

import { DatasetSummary } from './api.js';
import { BuilderState, buildDsl, ConstraintState, SelectorState } from './dsl.js';

export interface QueryBuilder {
  root: HTMLElement;
  /** Current DSL text, or null when the form is incomplete. */
  dsl(): string | null;
  setDataset(ds: DatasetSummary): void;
  showParseError(message: string, line?: number, column?: number): void;
  clearError(): void;
  onSubmit(cb: (dsl: string) => void): void;
}

function option(value: string, label = value): HTMLOptionElement {
  const o = document.createElement('option');
  o.value = value;
  o.textContent = label;
  return o;
}

function selectorPicker(
  label: string,
  listId: string,
  onChange: () => void,
): { root: HTMLElement; state: () => SelectorState; attrList: HTMLSelectElement; valueInput: HTMLInputElement } {
  const root = document.createElement('fieldset');
  root.className = 'selector';
  const legend = document.createElement('legend');
  legend.textContent = label;
  root.appendChild(legend);

  const attrList = document.createElement('select');
  attrList.className = 'selector-attr';
  attrList.appendChild(option('', '(node ids)'));
  const valueInput = document.createElement('input');
  valueInput.className = 'selector-values';
  valueInput.placeholder = 'value, value, ...';
  valueInput.setAttribute('list', listId);
  const datalist = document.createElement('datalist');
  datalist.id = listId;

  attrList.addEventListener('change', onChange);
  valueInput.addEventListener('input', onChange);
  root.append(attrList, valueInput, datalist);

  const state = (): SelectorState => ({
    kind: attrList.value === '' ? 'nodes' : 'attr',
    attribute: attrList.value || undefined,
    values: valueInput.value.split(',').map((v) => v.trim()).filter((v) => v !== ''),
  });
  return { root, state, attrList, valueInput };
}

export function createQueryBuilder(container: HTMLElement): QueryBuilder {
  let dataset: DatasetSummary | null = null;
  let submitCb: (dsl: string) => void = () => {};

  const form = document.createElement('form');
  form.className = 'query-builder';

  const from = selectorPicker('From', 'qb-from-values', refresh);
  const to = selectorPicker('To', 'qb-to-values', refresh);

  const lengthOp = document.createElement('select');
  lengthOp.className = 'length-op';
  lengthOp.append(option('<='), option('='));
  const lengthInput = document.createElement('input');
  lengthInput.type = 'number';
  lengthInput.className = 'max-length';
  lengthInput.min = '1';
  lengthInput.value = '2';
  const mode = document.createElement('select');
  mode.className = 'path-mode';
  mode.append(option('SIMPLE'), option('WALK'));

  const constraints = document.createElement('div');
  constraints.className = 'constraints';
  const addConstraint = document.createElement('button');
  addConstraint.type = 'button';
  addConstraint.className = 'add-constraint';
  addConstraint.textContent = '+ constraint';
  addConstraint.addEventListener('click', () => {
    constraints.appendChild(constraintRow());
    refresh();
  });

  const rawToggle = document.createElement('input');
  rawToggle.type = 'checkbox';
  rawToggle.className = 'raw-toggle';
  const rawLabel = document.createElement('label');
  rawLabel.append(rawToggle, document.createTextNode(' edit DSL directly'));
  const rawText = document.createElement('textarea');
  rawText.className = 'raw-dsl';
  rawText.hidden = true;
  rawToggle.addEventListener('change', () => {
    rawText.hidden = !rawToggle.checked;
    if (rawToggle.checked) rawText.value = buildFormDsl() ?? '';
    refresh();
  });
  rawText.addEventListener('input', refresh);

  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.className = 'submit-query';
  submit.textContent = 'Run query';
  submit.disabled = true;

  const errorBox = document.createElement('pre');
  errorBox.className = 'parse-error';
  errorBox.hidden = true;

  form.append(from.root, to.root, lengthOp, lengthInput, mode, constraints, addConstraint,
              rawLabel, rawText, submit, errorBox);
  container.appendChild(form);

  function constraintRow(): HTMLElement {
    const row = document.createElement('div');
    row.className = 'constraint-row';
    const subject = document.createElement('select');
    subject.className = 'cond-subject';
    subject.append(option('edge'), option('intermediate'), option('node'));
    const attr = document.createElement('input');
    attr.className = 'cond-attr';
    attr.placeholder = 'attribute';
    const op = document.createElement('select');
    op.className = 'cond-op';
    for (const o of ['=', '!=', '<', '<=', '>', '>=']) op.append(option(o));
    const value = document.createElement('input');
    value.className = 'cond-value';
    value.placeholder = 'value';
    const remove = document.createElement('button');
    remove.type = 'button';
    remove.textContent = '×';
    remove.addEventListener('click', () => {
      row.remove();
      refresh();
    });
    for (const el of [subject, attr, op, value]) el.addEventListener('input', refresh);
    row.append(subject, attr, op, value, remove);
    return row;
  }

  function formState(): BuilderState {
    const rows = constraints.querySelectorAll<HTMLElement>('.constraint-row');
    const conds: ConstraintState[] = [];
    for (const row of rows) {
      conds.push({
        subject: row.querySelector<HTMLSelectElement>('.cond-subject')!.value as ConstraintState['subject'],
        attribute: row.querySelector<HTMLInputElement>('.cond-attr')!.value,
        op: row.querySelector<HTMLSelectElement>('.cond-op')!.value as ConstraintState['op'],
        value: row.querySelector<HTMLInputElement>('.cond-value')!.value,
      });
    }
    return {
      maxLength: parseInt(lengthInput.value, 10),
      lengthOp: lengthOp.value as '<=' | '=',
      from: from.state(),
      to: to.state(),
      mode: mode.value as 'SIMPLE' | 'WALK',
      constraints: conds,
    };
  }

  function buildFormDsl(): string | null {
    return buildDsl(formState());
  }

  function currentDsl(): string | null {
    if (rawToggle.checked) {
      const text = rawText.value.trim();
      return text === '' ? null : text;
    }
    return buildFormDsl();
  }

  function refresh(): void {
    submit.disabled = currentDsl() === null;
  }

  function fillAutocomplete(picker: typeof from, listId: string): void {
    const datalist = picker.root.querySelector<HTMLDataListElement>(`#${listId}`)!;
    datalist.textContent = '';
    const attr = picker.attrList.value;
    const values = attr === '' ? dataset?.nodeIds ?? [] : dataset?.values?.[attr] ?? [];
    for (const v of values) datalist.appendChild(option(v));
  }

  form.addEventListener('submit', (e) => {
    e.preventDefault();
    const dsl = currentDsl();
    if (dsl !== null) submitCb(dsl);
  });

  const builder: QueryBuilder = {
    root: form,
    dsl: currentDsl,
    setDataset(ds) {
      dataset = ds;
      for (const picker of [from, to]) {
        const keep = picker.attrList.value;
        picker.attrList.textContent = '';
        picker.attrList.appendChild(option('', '(node ids)'));
        for (const attr of Object.keys(ds.schema).sort()) {
          if (ds.schema[attr] === 'categorical') picker.attrList.appendChild(option(attr));
        }
        picker.attrList.value = keep;
      }
      fillAutocomplete(from, 'qb-from-values');
      fillAutocomplete(to, 'qb-to-values');
      refresh();
    },
    showParseError(message, line, column) {
      let text = message;
      if (line !== undefined && column !== undefined) {
        const dsl = currentDsl() ?? '';
        const src = dsl.split('\n')[line - 1] ?? '';
        text = `${message}\n${src}\n${' '.repeat(Math.max(column - 1, 0))}^`;
      }
      errorBox.textContent = text;
      errorBox.hidden = false;
    },
    clearError() {
      errorBox.hidden = true;
      errorBox.textContent = '';
    },
    onSubmit(cb) {
      submitCb = cb;
    },
  };

  from.attrList.addEventListener('change', () => fillAutocomplete(from, 'qb-from-values'));
  to.attrList.addEventListener('change', () => fillAutocomplete(to, 'qb-to-values'));
  refresh();
  return builder;
}
