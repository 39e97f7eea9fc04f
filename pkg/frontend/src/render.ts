// DOM rendering for the console: matrix grid, scaler editors, preset bar,
// status banner. All state changes go through the UiSession; this layer
// only draws what the server confirmed and forwards clicks.

import type { UiSession } from "./session.js";
import type { ScalerField } from "./types.js";

const SCALER_FIELDS: ScalerField[] = ["in_min", "in_max", "out_min", "out_max", "exponent"];

export function renderBanner(el: HTMLElement, session: UiSession): void {
  if (!session.connected) {
    el.textContent = "engine unreachable — retrying…";
    el.className = "banner banner-down";
  } else if (session.lastError) {
    el.textContent = session.lastError;
    el.className = "banner banner-error";
  } else {
    el.textContent = "connected";
    el.className = "banner banner-ok";
  }
}

export function renderMatrix(el: HTMLElement, session: UiSession): void {
  const state = session.state;
  el.replaceChildren();
  if (!state) return;
  const table = document.createElement("table");
  table.className = "matrix";

  const head = table.insertRow();
  head.insertCell().textContent = "";
  for (const out of state.outputs) {
    const th = document.createElement("th");
    th.textContent = out.name;
    th.title = out.address;
    head.append(th);
  }

  state.matrix.gains.forEach((row, i) => {
    const tr = table.insertRow();
    const label = document.createElement("th");
    label.textContent = state.inputs[i]?.name ?? `in ${i}`;
    label.title = state.inputs[i]?.address ?? "";
    tr.append(label);
    row.forEach((gain, j) => {
      const td = tr.insertCell();
      const btn = document.createElement("button");
      btn.className = gain > 0 ? "cell cell-on" : "cell cell-off";
      btn.textContent = gain > 0 ? (gain === 1 ? "●" : gain.toFixed(2)) : "";
      btn.addEventListener("click", () => void session.toggleCell(i, j));
      td.append(btn);
    });
  });
  el.append(table);
}

export function renderScalers(el: HTMLElement, session: UiSession): void {
  const state = session.state;
  el.replaceChildren();
  if (!state) return;
  state.outputs.forEach((out, route) => {
    const box = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = `${out.name} → ${out.address}`;
    box.append(legend);
    for (const field of SCALER_FIELDS) {
      const label = document.createElement("label");
      label.textContent = field;
      const input = document.createElement("input");
      input.type = "number";
      input.step = "any";
      input.value = String(out.scaler[field]);
      input.addEventListener("change", () => {
        const value = Number(input.value);
        if (!Number.isFinite(value)) return;
        void session.editScaler(route, field, value).then((ok) => {
          // rejected commits (e.g. exponent <= 0) restore the last
          // confirmed value; the banner carries the validation message
          if (!ok && session.state) {
            input.value = String(session.state.outputs[route].scaler[field]);
          }
        });
      });
      label.append(input);
      box.append(label);
    }
    el.append(box);
  });
}

export function renderPresets(el: HTMLElement, session: UiSession): void {
  const state = session.state;
  el.replaceChildren();
  if (!state) return;

  const saveRow = document.createElement("div");
  const nameInput = document.createElement("input");
  nameInput.placeholder = "preset id";
  const saveBtn = document.createElement("button");
  saveBtn.textContent = "save";
  saveBtn.addEventListener("click", () => {
    if (nameInput.value.trim()) void session.savePreset(nameInput.value.trim());
  });
  const rampInput = document.createElement("input");
  rampInput.type = "number";
  rampInput.value = "1000";
  rampInput.title = "recall ramp (ms)";
  saveRow.append(nameInput, saveBtn, rampInput);
  el.append(saveRow);

  const list = document.createElement("ul");
  for (const preset of state.presets) {
    const li = document.createElement("li");
    const btn = document.createElement("button");
    btn.textContent = preset.id;
    btn.className = preset.id === session.selectedPresetId ? "preset selected" : "preset";
    btn.addEventListener("click", () =>
      void session.recall(preset.id, Number(rampInput.value) || 0));
    li.append(btn);
    list.append(li);
  }
  el.append(list);

  const undoBtn = document.createElement("button");
  undoBtn.textContent = "undo";
  undoBtn.disabled = session.previous === null;
  undoBtn.addEventListener("click", () => void session.undo());
  el.append(undoBtn);
}
