/** Minimal DOM glue: renders wizard views and wires button events. */

import { Client } from "./api.js";
import { View, Wizard } from "./wizard.js";

function el(tag: string, text?: string, cls?: string): HTMLElement {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  if (cls !== undefined) node.className = cls;
  return node;
}

function render(root: HTMLElement, wizard: Wizard): void {
  const view = wizard.renderQuestion();
  root.replaceChildren();
  root.appendChild(renderView(view, wizard, () => render(root, wizard)));
}

function renderView(view: View, wizard: Wizard, rerender: () => void): HTMLElement {
  const box = el("div", undefined, `view view-${view.kind}`);
  switch (view.kind) {
    case "choices": {
      box.appendChild(el("h2", view.question));
      for (const choice of view.choices) {
        const button = el("button", choice.label, "choice-card");
        button.onclick = () =>
          wizard.submitAnswer({ choice: choice.index }).then(rerender, showError(box));
        box.appendChild(button);
      }
      break;
    }
    case "form": {
      box.appendChild(el("h2", view.question));
      const form = document.createElement("form");
      for (const param of view.params) {
        const label = el("label", `${param.name} (${param.type})`);
        const input = document.createElement("input");
        input.name = param.name;
        label.appendChild(input);
        form.appendChild(label);
      }
      const submit = el("button", "Add", "submit") as HTMLButtonElement;
      submit.type = "submit";
      form.appendChild(submit);
      form.onsubmit = (event) => {
        event.preventDefault();
        const params: Record<string, unknown> = {};
        for (const param of view.params) {
          const raw = (form.elements.namedItem(param.name) as HTMLInputElement).value;
          if (raw === "" && param.optional) continue;
          try {
            params[param.name] = JSON.parse(raw);
          } catch {
            params[param.name] = raw;
          }
        }
        wizard.submitAnswer({ params }).then(rerender, showError(box));
      };
      box.appendChild(form);
      break;
    }
    case "summary": {
      box.appendChild(el("h2", "Model so far"));
      const list = el("ul", undefined, "preview");
      for (const c of view.constraints) list.appendChild(el("li", c.text));
      box.appendChild(list);
      const download = el("button", "Download model.lp") as HTMLButtonElement;
      download.disabled = !view.downloadEnabled;
      download.onclick = () =>
        wizard.downloadModel().then(saveAs("model.lp"), showError(box));
      box.appendChild(download);
      break;
    }
    case "stale": {
      box.appendChild(el("p", "This session expired on the server.", "banner"));
      const pre = el("pre", view.transcript, "transcript-export");
      box.appendChild(el("p", "Copy your answers to replay them later:"));
      box.appendChild(pre);
      break;
    }
    case "fallback": {
      box.appendChild(el("pre", JSON.stringify(view.raw, null, 2)));
      break;
    }
  }
  const nav = el("div", undefined, "nav");
  if (view.kind === "choices" || view.kind === "form") {
    const back = el("button", "Back") as HTMLButtonElement;
    back.disabled = !view.backEnabled;
    back.onclick = () => wizard.back().then(rerender, showError(box));
    nav.appendChild(back);
    const finish = el("button", "Finish branch");
    finish.onclick = () =>
      wizard.submitAnswer({ navigation: "FINISH_BRANCH" }).then(rerender, showError(box));
    nav.appendChild(finish);
  }
  box.appendChild(nav);
  return box;
}

function showError(box: HTMLElement): (error: unknown) => void {
  return (error) => {
    box.appendChild(el("p", String(error), "error"));
  };
}

function saveAs(filename: string): (text: string) => void {
  return (text) => {
    const blob = new Blob([text], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = filename;
    link.click();
    URL.revokeObjectURL(link.href);
  };
}

export async function mount(root: HTMLElement, baseUrl = ""): Promise<void> {
  const client = new Client(baseUrl, (url, init) => fetch(url, init));
  const wizard = await Wizard.start(client);
  render(root, wizard);
}

if (typeof document !== "undefined" && document.getElementById("app") !== null) {
  void mount(document.getElementById("app") as HTMLElement);
}
