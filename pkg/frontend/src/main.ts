/** DOM wiring for the scenario explorer (index.html). */

import { ApiClient } from "./api.js";
import {
  renderComparisonTable,
  renderR0Bars,
  renderSeriesChart,
  type LabelledResponse,
} from "./charts.js";
import { ExplorerStore } from "./store.js";

const API_BASE =
  new URLSearchParams(window.location.search).get("api") ??
  "http://127.0.0.1:8000";

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
};

function render(store: ExplorerStore): void {
  const draft = store.draft;
  if (!draft) return;

  const picker = $("scenario-picker") as HTMLSelectElement;
  if (picker.options.length === 0) {
    for (const def of store.definitions) {
      const option = document.createElement("option");
      option.value = def.id;
      option.textContent = def.id;
      option.title = def.description;
      picker.appendChild(option);
    }
  }
  picker.value = draft.pristine ? draft.baseScenario : "";

  const toggles = $("industry-toggles");
  if (toggles.childElementCount === 0) {
    for (const code of store.codes) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.code = code;
      box.addEventListener("change", () => void store.toggle(code));
      label.appendChild(box);
      label.appendChild(document.createTextNode(code));
      toggles.appendChild(label);
    }
  }
  for (const box of toggles.querySelectorAll("input")) {
    box.checked = draft.openIndustries.has(box.dataset.code ?? "");
  }

  ($("schools") as HTMLInputElement).checked = draft.schoolsOpen;
  ($("distancing") as HTMLInputElement).checked = draft.homeDistancing;
  ($("onsite") as HTMLInputElement).checked = draft.onsiteConsumptionOpen;

  $("status").textContent = store.pending
    ? "simulating…"
    : (store.lastError ?? "");
  $("field-errors").textContent = Object.values(store.errors).join("; ");

  const rows: LabelledResponse[] = [
    ...store.saved.map((s) => ({ label: s.draft.name, response: s.response })),
  ];
  if (store.current) {
    rows.push({ label: draft.name, response: store.current });
    $("headline").innerHTML =
      `<span data-r0="${store.current.r0}" data-va="${store.current.va_change_pp}">` +
      `R0 ${store.current.r0.toFixed(3)} ± ${(2 * store.current.r0_sd).toFixed(3)}, ` +
      `value-added boost ${store.current.va_change_pp.toFixed(2)}pp vs lockdown</span>`;
    $("series").innerHTML = renderSeriesChart(
      store.current,
      store.lockdownBaseline,
    );
  }
  if (rows.length > 0) {
    $("r0-bars").innerHTML = renderR0Bars(rows);
    $("comparison").innerHTML = renderComparisonTable(rows);
  }
}

async function boot(): Promise<void> {
  const store = new ExplorerStore(new ApiClient(API_BASE));
  store.subscribe(() => render(store));

  ($("scenario-picker") as HTMLSelectElement).addEventListener("change", (e) =>
    void store.selectScenario((e.target as HTMLSelectElement).value),
  );
  ($("schools") as HTMLInputElement).addEventListener("change", (e) =>
    void store.flip("schoolsOpen", (e.target as HTMLInputElement).checked),
  );
  ($("distancing") as HTMLInputElement).addEventListener("change", (e) =>
    void store.flip("homeDistancing", (e.target as HTMLInputElement).checked),
  );
  ($("onsite") as HTMLInputElement).addEventListener("change", (e) =>
    void store.flip(
      "onsiteConsumptionOpen",
      (e.target as HTMLInputElement).checked,
    ),
  );
  for (const key of ["tau", "delta_s_save", "b", "horizon"] as const) {
    ($(`param-${key}`) as HTMLInputElement).addEventListener("change", (e) =>
      void store.setParam(key, Number((e.target as HTMLInputElement).value)),
    );
  }
  for (const key of ["prod_fn", "cons_fn"] as const) {
    ($(`param-${key}`) as HTMLSelectElement).addEventListener("change", (e) =>
      void store.setParam(key, (e.target as HTMLSelectElement).value),
    );
  }
  $("save-draft").addEventListener("click", () => store.saveCurrent());

  try {
    await store.init();
  } catch (error) {
    $("status").textContent = `cannot reach service at ${API_BASE}: ${String(
      error,
    )}`;
  }
}

void boot();
