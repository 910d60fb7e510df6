// App orchestration: dataset picking, the probe session screen, the
// mutation queue (one in-flight mutation, replay once after a 409), hover
// reveals with cancel-on-newer, and drag-and-drop wiring.

import type { Animator } from "./animator";
import { defaultAnimator } from "./animator";
import { ApiClient, ConflictError } from "./api";
import { applyDimming, applyLayout, cardsById, clearDimming } from "./grid";
import type {
  DatasetDetail,
  GroupJson,
  LayoutJson,
  MutationResponse,
  RevealJson,
} from "./types";

export interface AppOptions {
  animator?: Animator;
}

type DragPayload =
  | { kind: "object"; name: string }
  | { kind: "group"; id: number }
  | { kind: "probe-entry"; name: string };

export function encodeDragPayload(p: DragPayload): string {
  if (p.kind === "object") return `obj:${p.name}`;
  if (p.kind === "group") return `grp:${p.id}`;
  return `probe:${p.name}`;
}

export function parseDragPayload(text: string): DragPayload | null {
  if (text.startsWith("obj:")) return { kind: "object", name: text.slice(4) };
  if (text.startsWith("grp:")) {
    const id = Number(text.slice(4));
    return Number.isInteger(id) ? { kind: "group", id } : null;
  }
  if (text.startsWith("probe:")) return { kind: "probe-entry", name: text.slice(6) };
  return null;
}

interface ProbeEntry {
  name: string;
  weight: string; // exact hundredths as sent by the server, e.g. "0.50"
}

export class App {
  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private readonly animator: Animator;

  private dataset: DatasetDetail | null = null;
  private groups = new Map<number, GroupJson>();
  private sessionId = "";
  private revision = 0;
  private layout: LayoutJson = { layers: [] };
  private probeEntries: ProbeEntry[] = [];
  private selectedGroup: GroupJson | null = null;

  private queue: Promise<void> = Promise.resolve();
  private revealSeq = 0;

  // regions
  private gridEl!: HTMLElement;
  private probeListEl!: HTMLElement;
  private binEl!: HTMLElement;
  private browserEl!: HTMLElement;
  private extentPaneEl!: HTMLElement;
  private membersPaneEl!: HTMLElement;
  private toastEl!: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient, opts: AppOptions = {}) {
    this.root = root;
    this.api = api;
    this.animator = opts.animator ?? defaultAnimator();
  }

  /** Everything queued (mutations + probe-pane refresh + animation) done. */
  whenIdle(): Promise<void> {
    return this.queue;
  }

  get currentRevision(): number {
    return this.revision;
  }

  get session(): string {
    return this.sessionId;
  }

  async start(): Promise<void> {
    await this.renderDatasetPicker();
  }

  // -- dataset picker ------------------------------------------------------

  private async renderDatasetPicker(): Promise<void> {
    this.root.textContent = "";
    const panel = el("div", "dataset-picker");
    panel.appendChild(el("h1", "", "conceptprobe"));
    panel.appendChild(el("p", "hint", "Pick a dataset or paste one to upload."));

    const list = el("div", "dataset-list");
    list.dataset.testid = "dataset-list";
    panel.appendChild(list);

    const text = document.createElement("textarea");
    text.placeholder = "Paste a .cxt (Burmeister) or CSV context here";
    text.dataset.testid = "upload-text";
    const upload = el("button", "", "Upload dataset") as HTMLButtonElement;
    upload.dataset.testid = "upload-button";
    upload.addEventListener("click", async () => {
      const body = text.value;
      if (!body.trim()) return;
      const isCxt = body.startsWith("B\n") || body.startsWith("B\r\n");
      try {
        const summary = await this.api.createDataset(
          body,
          isCxt ? "text/plain" : "text/csv",
        );
        await this.openDataset(summary.id);
      } catch (err) {
        this.toast(`upload failed: ${message(err)}`);
      }
    });
    panel.append(text, upload);
    this.root.appendChild(panel);

    try {
      const datasets = await this.api.listDatasets();
      for (const ds of datasets) {
        const button = el(
          "button",
          "dataset-item",
          `${ds.name} (${ds.objects}×${ds.attributes}, ${ds.groupCount} groups)`,
        ) as HTMLButtonElement;
        button.dataset.testid = `dataset-${ds.id}`;
        button.addEventListener("click", () => void this.openDataset(ds.id));
        list.appendChild(button);
      }
    } catch (err) {
      this.toast(`cannot reach server: ${message(err)}`);
    }
  }

  async openDataset(datasetId: string): Promise<void> {
    this.dataset = await this.api.getDataset(datasetId);
    const created = await this.api.createProbe(datasetId);
    this.sessionId = created.sessionId;
    this.revision = created.revision;
    this.layout = created.layout;
    this.groups = new Map();
    this.probeEntries = [];
    this.selectedGroup = null;
    this.renderSessionScreen();
    await this.redrawLayout(null);
  }

  // -- session screen --------------------------------------------------------

  private renderSessionScreen(): void {
    const ds = this.dataset!;
    this.root.textContent = "";
    const app = el("div", "app");

    const main = el("main", "main");
    const gridArea = el("section", "grid-area");
    const probeChip = el("div", "probe-chip", "?");
    probeChip.title = "the probe: drop objects or groups here";
    probeChip.dataset.testid = "probe-chip";
    gridArea.appendChild(probeChip);
    this.gridEl = el("div", "grid");
    this.gridEl.dataset.testid = "grid";
    gridArea.appendChild(this.gridEl);
    main.appendChild(gridArea);

    const side = el("aside", "side");

    const probePane = el("div", "probe-pane pane");
    const probeHeader = el("div", "pane-header");
    probeHeader.appendChild(el("span", "", `Probe — ${ds.name}`));
    this.binEl = el("div", "bin", "\u{1F5D1}");
    this.binEl.title = "drop a probe entry to remove it; double-click to clear";
    this.binEl.dataset.testid = "bin";
    probeHeader.appendChild(this.binEl);
    probePane.appendChild(probeHeader);
    this.probeListEl = el("div", "probe-entries");
    this.probeListEl.dataset.testid = "probe-entries";
    probePane.appendChild(this.probeListEl);
    side.appendChild(probePane);

    this.extentPaneEl = el("div", "extent-pane pane");
    this.extentPaneEl.dataset.testid = "extent-pane";
    side.appendChild(this.extentPaneEl);

    this.browserEl = el("div", "entity-browser pane");
    this.browserEl.dataset.testid = "entity-browser";
    side.appendChild(this.browserEl);

    main.appendChild(side);
    app.appendChild(main);

    this.membersPaneEl = el("footer", "members-pane");
    this.membersPaneEl.dataset.testid = "members-pane";
    app.appendChild(this.membersPaneEl);

    this.toastEl = el("div", "toast hidden");
    app.appendChild(this.toastEl);

    this.root.appendChild(app);

    this.renderEntityBrowser();
    this.renderProbePane();
    this.renderExtentPane();
    this.renderMembersPane();
    this.wireGridEvents();
    this.wireDropZones(probeChip, probePane);
  }

  private renderEntityBrowser(): void {
    const ds = this.dataset!;
    this.browserEl.textContent = "";
    this.browserEl.appendChild(el("div", "pane-header", "Objects"));
    const byLetter = new Map<string, string[]>();
    for (const name of [...ds.objectNames].sort((a, b) => a.localeCompare(b))) {
      const letter = (name[0] ?? "#").toUpperCase();
      const bucket = byLetter.get(letter);
      if (bucket) bucket.push(name);
      else byLetter.set(letter, [name]);
    }
    for (const [letter, names] of byLetter) {
      const details = document.createElement("details");
      details.open = true;
      const summary = document.createElement("summary");
      summary.textContent = letter;
      details.appendChild(summary);
      const ul = document.createElement("ul");
      for (const name of names) {
        const li = document.createElement("li");
        li.className = "entity";
        li.textContent = name;
        li.draggable = true;
        li.dataset.object = name;
        li.addEventListener("dblclick", () => this.requestAddObject(name));
        li.addEventListener("dragstart", (ev) => {
          ev.dataTransfer?.setData(
            "text/plain",
            encodeDragPayload({ kind: "object", name }),
          );
        });
        ul.appendChild(li);
      }
      details.appendChild(ul);
      this.browserEl.appendChild(details);
    }
  }

  private renderProbePane(): void {
    this.probeListEl.textContent = "";
    if (!this.probeEntries.length) {
      this.probeListEl.appendChild(
        el("div", "hint", "empty — double-click or drag objects here"),
      );
      return;
    }
    for (const entry of this.probeEntries) {
      const row = el("div", "probe-entry");
      row.dataset.object = entry.name;
      row.draggable = true;
      row.addEventListener("dragstart", (ev) => {
        ev.dataTransfer?.setData(
          "text/plain",
          encodeDragPayload({ kind: "probe-entry", name: entry.name }),
        );
      });
      const name = el("span", "probe-name", entry.name);
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = "100";
      slider.step = "1";
      slider.value = String(Math.round(parseFloat(entry.weight) * 100));
      slider.dataset.testid = `slider-${entry.name}`;
      const value = el("span", "weight-value", entry.weight);
      slider.addEventListener("input", () => {
        value.textContent = formatWeight(slider.value);
      });
      slider.addEventListener("change", () => {
        this.requestSetWeight(entry.name, formatWeight(slider.value));
      });
      row.append(name, slider, value);
      this.probeListEl.appendChild(row);
    }
  }

  private renderExtentPane(): void {
    this.extentPaneEl.textContent = "";
    this.extentPaneEl.appendChild(el("div", "pane-header", "Group extent"));
    if (!this.selectedGroup) {
      this.extentPaneEl.appendChild(el("div", "hint", "click a group"));
      return;
    }
    const probeNames = new Set(this.probeEntries.map((e) => e.name));
    const ul = document.createElement("ul");
    for (const name of this.selectedGroup.extent) {
      const li = document.createElement("li");
      li.className = "entity extent-entry";
      li.textContent = name;
      li.dataset.object = name;
      li.draggable = true;
      if (probeNames.has(name)) li.classList.add("common");
      li.addEventListener("dblclick", () => this.requestAddObject(name));
      li.addEventListener("dragstart", (ev) => {
        ev.dataTransfer?.setData(
          "text/plain",
          encodeDragPayload({ kind: "object", name }),
        );
      });
      ul.appendChild(li);
    }
    this.extentPaneEl.appendChild(ul);
  }

  private renderMembersPane(): void {
    this.membersPaneEl.textContent = "";
    if (!this.selectedGroup) return;
    const g = this.selectedGroup;
    this.membersPaneEl.appendChild(
      el("div", "pane-header", `Group ${g.representative} — ${g.badge} member(s)`),
    );
    const ul = document.createElement("ul");
    ul.className = "members";
    for (const m of g.members) {
      const li = document.createElement("li");
      li.textContent = m;
      ul.appendChild(li);
    }
    this.membersPaneEl.appendChild(ul);
  }

  // -- grid events -------------------------------------------------------------

  private wireGridEvents(): void {
    this.gridEl.addEventListener("click", (ev) => {
      const card = (ev.target as HTMLElement).closest<HTMLElement>(".group-card");
      if (!card) return;
      const group = this.groups.get(Number(card.dataset.groupId));
      if (group) {
        this.selectedGroup = group;
        this.renderExtentPane();
        this.renderMembersPane();
      }
    });
    this.gridEl.addEventListener("mouseover", (ev) => {
      const card = (ev.target as HTMLElement).closest<HTMLElement>(".group-card");
      if (card) this.hoverGroup(Number(card.dataset.groupId));
    });
    this.gridEl.addEventListener("mouseout", (ev) => {
      const card = (ev.target as HTMLElement).closest<HTMLElement>(".group-card");
      if (card) this.unhover();
    });
    this.gridEl.addEventListener("dragstart", (ev) => {
      const card = (ev.target as HTMLElement).closest<HTMLElement>(".group-card");
      if (card) {
        ev.dataTransfer?.setData(
          "text/plain",
          encodeDragPayload({ kind: "group", id: Number(card.dataset.groupId) }),
        );
      }
    });
  }

  private wireDropZones(probeChip: HTMLElement, probePane: HTMLElement): void {
    for (const zone of [probeChip, probePane]) {
      zone.addEventListener("dragover", (ev) => ev.preventDefault());
      zone.addEventListener("drop", (ev) => {
        ev.preventDefault();
        const payload = parseDragPayload(ev.dataTransfer?.getData("text/plain") ?? "");
        if (payload) this.handleProbeDrop(payload);
      });
    }
    this.binEl.addEventListener("dragover", (ev) => ev.preventDefault());
    this.binEl.addEventListener("drop", (ev) => {
      ev.preventDefault();
      const payload = parseDragPayload(ev.dataTransfer?.getData("text/plain") ?? "");
      if (payload?.kind === "probe-entry") this.requestRemoveObject(payload.name);
    });
    this.binEl.addEventListener("dblclick", () => this.requestClear());
  }

  handleProbeDrop(payload: DragPayload): void {
    if (payload.kind === "object") this.requestAddObject(payload.name);
    else if (payload.kind === "group") this.requestAddGroup(payload.id);
  }

  // -- mutations ------------------------------------------------------------------

  requestAddObject(name: string): Promise<void> {
    return this.enqueue((rev) => this.api.addObject(this.sessionId, name, rev));
  }

  requestRemoveObject(name: string): Promise<void> {
    return this.enqueue((rev) => this.api.removeObject(this.sessionId, name, rev));
  }

  requestClear(): Promise<void> {
    return this.enqueue((rev) => this.api.clearProbe(this.sessionId, rev));
  }

  requestSetWeight(name: string, weight: string): Promise<void> {
    return this.enqueue((rev) => this.api.setWeight(this.sessionId, name, weight, rev));
  }

  requestAddGroup(groupId: number): Promise<void> {
    return this.enqueue((rev) => this.api.addGroup(this.sessionId, groupId, rev));
  }

  private enqueue(fn: (revision: number) => Promise<MutationResponse>): Promise<void> {
    const task = this.queue.then(() => this.runMutation(fn));
    this.queue = task.catch(() => {});
    return task;
  }

  private async runMutation(
    fn: (revision: number) => Promise<MutationResponse>,
  ): Promise<void> {
    try {
      let res: MutationResponse;
      try {
        res = await fn(this.revision);
      } catch (err) {
        if (!(err instanceof ConflictError)) throw err;
        await this.resync();
        res = await fn(this.revision); // replay once at the fresh revision
      }
      this.revision = res.revision;
      this.layout = res.layout;
      await this.refreshProbeEntries();
      await this.redrawLayout(res.delta);
    } catch (err) {
      this.toast(message(err));
    }
  }

  private async resync(): Promise<void> {
    const lay = await this.api.getLayout(this.sessionId);
    this.revision = lay.revision;
    this.layout = { layers: lay.layers };
    await this.refreshProbeEntries();
    await this.redrawLayout(null);
  }

  private async refreshProbeEntries(): Promise<void> {
    const info = await this.api.getProbe(this.sessionId);
    this.probeEntries = info.probe.objects;
    this.renderProbePane();
    this.renderExtentPane(); // common-entity highlighting depends on the probe
  }

  private async redrawLayout(delta: MutationResponse["delta"] | null): Promise<void> {
    this.groups = new Map();
    for (const layer of this.layout.layers) {
      for (const cls of layer.classes) {
        for (const g of cls.groups) this.groups.set(g.id, g);
      }
    }
    await applyLayout(this.gridEl, this.layout, delta, this.animator);
  }

  // -- reveal -------------------------------------------------------------------------

  hoverGroup(groupId: number): void {
    const seq = ++this.revealSeq;
    this.api
      .reveal(this.sessionId, groupId)
      .then((res) => {
        if (seq === this.revealSeq) this.applyReveal(res);
      })
      .catch(() => {
        // hidden group or transient failure: leave the display untouched
      });
  }

  unhover(): void {
    this.revealSeq++;
    clearDimming(this.gridEl);
    this.clearCommonMarks();
  }

  private applyReveal(res: RevealJson): void {
    applyDimming(this.gridEl, new Set(res.highlighted));
    const common = new Set(res.extent);
    for (const row of this.probeListEl.querySelectorAll<HTMLElement>(".probe-entry")) {
      row.classList.toggle("common", common.has(row.dataset.object ?? ""));
    }
    for (const entry of this.extentPaneEl.querySelectorAll<HTMLElement>(".extent-entry")) {
      entry.classList.toggle("common", common.has(entry.dataset.object ?? ""));
    }
  }

  private clearCommonMarks(): void {
    for (const entry of this.root.querySelectorAll(".probe-entry.common")) {
      entry.classList.remove("common");
    }
    // restore probe-membership highlighting in the extent pane
    this.renderExtentPane();
  }

  // -- misc ---------------------------------------------------------------------------

  private toast(text: string): void {
    if (!this.toastEl) return;
    this.toastEl.textContent = text;
    this.toastEl.classList.remove("hidden");
    window.setTimeout(() => this.toastEl.classList.add("hidden"), 4000);
  }

  /** Test hook: ids of the cards in DOM order, per layer. */
  domLayerOrder(): { sd: string; groupIds: number[] }[] {
    const rows: { sd: string; groupIds: number[] }[] = [];
    for (const layer of this.gridEl.querySelectorAll<HTMLElement>(".layer")) {
      rows.push({
        sd: layer.dataset.sd ?? "",
        groupIds: [...layer.querySelectorAll<HTMLElement>(".group-card")].map((c) =>
          Number(c.dataset.groupId),
        ),
      });
    }
    return rows;
  }

  /** Test hook: ids of currently dimmed cards. */
  dimmedGroupIds(): number[] {
    return [...cardsById(this.gridEl)]
      .filter(([, el]) => el.classList.contains("dimmed"))
      .map(([id]) => id);
  }
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function formatWeight(hundredths: string | number): string {
  const n = Math.max(0, Math.min(100, Math.round(Number(hundredths))));
  return `${Math.floor(n / 100)}.${String(n % 100).padStart(2, "0")}`;
}

function message(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
