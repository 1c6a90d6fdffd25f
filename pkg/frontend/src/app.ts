// DOM wiring: five sections (demography, tissue choice, reference zone,
// three plan editors, results) bound to the session state. Recalculation is
// debounced on input and available immediately through the Calculate button.

import { httpClient } from './api.js';
import {
  SessionState,
  canCalculate,
  newSession,
  recalculate,
  renderResults,
} from './planner.js';
import type { ServiceClient, TissueInfo, TissuesResult } from './types.js';
import { FieldError } from './validate.js';

const DEBOUNCE_MS = 400;

const PLAN_FIELDS: { key: 'n' | 'd' | 'mPerDay' | 'deltaT' | 'ja' | 'gap'; label: string }[] = [
  { key: 'n', label: 'fractions' },
  { key: 'd', label: 'Gy/fraction' },
  { key: 'mPerDay', label: 'fractions/day' },
  { key: 'deltaT', label: 'interval (h)' },
  { key: 'ja', label: 'weekdays off' },
  { key: 'gap', label: 'gap after (d)' },
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function planEditorHtml(index: number): string {
  const inputs = PLAN_FIELDS.map(
    ({ key, label }) => `
      <label>${label}
        <input type="text" id="plan-${index}-${key}" data-plan="${index}" data-field="${key}">
      </label>
      <div class="field-error" id="error-${index}-${key}"></div>`,
  ).join('');
  return `<fieldset class="plan" id="plan-${index}"><legend>plan ${index + 1}</legend>${inputs}</fieldset>`;
}

function fillTissuePicker(select: HTMLSelectElement, tissues: TissueInfo[],
                          kind: 'oar' | 'target'): void {
  select.innerHTML = '<option value="">(none)</option>' + tissues
    .filter((t) => t.kind === kind)
    .map((t) => `<option value="${t.name}">${t.name}</option>`)
    .join('');
}

function showErrors(state: SessionState): void {
  document.querySelectorAll('.field-error').forEach((node) => (node.textContent = ''));
  const referenceError = el<HTMLDivElement>('error-reference');
  referenceError.textContent = '';
  for (const error of state.errors) {
    const target = error.plan < 0
      ? referenceError
      : document.getElementById(`error-${error.plan}-${error.field}`);
    if (target) target.textContent = error.message;
  }
}

export function start(): void {
  const state = newSession();
  let tissues: TissueInfo[] = [];
  let client: ServiceClient = httpClient(
    (el<HTMLInputElement>('service-url').value || 'http://127.0.0.1:8821'),
  );
  let timer: number | undefined;

  el<HTMLDivElement>('plans').innerHTML = [0, 1, 2].map(planEditorHtml).join('');

  const resultsPanel = el<HTMLDivElement>('results');
  const calculateButton = el<HTMLButtonElement>('calculate');

  function refresh(): void {
    resultsPanel.innerHTML = renderResults(state);
    showErrors(state);
    calculateButton.disabled = !canCalculate({ ...state });
  }

  async function runNow(): Promise<void> {
    resultsPanel.innerHTML = renderResults({ ...state, inFlight: true } as SessionState);
    await recalculate(state, client, tissues);
    refresh();
  }

  function schedule(): void {
    // Inputs are validated immediately; the service round-trip is debounced.
    state.errors = [];
    window.clearTimeout(timer);
    timer = window.setTimeout(() => void runNow(), DEBOUNCE_MS);
  }

  function bindPlanInputs(): void {
    document.querySelectorAll<HTMLInputElement>('#plans input').forEach((input) => {
      const plan = Number(input.dataset.plan);
      const field = input.dataset.field as keyof (typeof state.plans)[number];
      input.value = state.plans[plan][field];
      input.addEventListener('input', () => {
        state.plans[plan][field] = input.value;
        schedule();
      });
    });
  }

  for (const key of ['patient', 'pathology', 'operator', 'notes'] as const) {
    const input = el<HTMLInputElement>(`demo-${key}`);
    input.addEventListener('input', () => {
      state.demographics[key] = input.value; // stays on the page; print only
    });
  }

  const oarSelect = el<HTMLSelectElement>('oar');
  const targetSelect = el<HTMLSelectElement>('target');
  oarSelect.addEventListener('change', () => { state.oar = oarSelect.value; schedule(); });
  targetSelect.addEventListener('change', () => { state.target = targetSelect.value; schedule(); });

  const referenceInput = el<HTMLInputElement>('reference-dose');
  referenceInput.value = state.referenceDose;
  referenceInput.addEventListener('input', () => {
    state.referenceDose = referenceInput.value;
    schedule();
  });

  el<HTMLInputElement>('service-url').addEventListener('change', () => {
    client = httpClient(el<HTMLInputElement>('service-url').value);
    void loadTissues();
  });

  calculateButton.addEventListener('click', () => void runNow());
  el<HTMLButtonElement>('print').addEventListener('click', () => window.print());

  async function loadTissues(): Promise<void> {
    try {
      const reply = await client.get<TissuesResult>('/tissues');
      tissues = reply.result?.tissues ?? [];
      fillTissuePicker(oarSelect, tissues, 'oar');
      fillTissuePicker(targetSelect, tissues, 'target');
      state.serviceError = null;
    } catch {
      state.serviceError = 'service unreachable; check the URL and that `eqdose serve` is running';
    }
    refresh();
  }

  bindPlanInputs();
  void loadTissues();
  refresh();
}

if (typeof document !== 'undefined' && document.getElementById('plans')) {
  start();
}
