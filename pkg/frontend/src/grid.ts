// The layered group grid: one row per semantic-distance layer, classes of
// equal filtered extent sit side by side and are separated by gaps, each
// group is a card with its representative label and a member-count badge.

import type { Animator } from "./animator";
import { SLIDE_MS } from "./animator";
import type { DeltaJson, LayoutJson } from "./types";

export function renderGrid(container: HTMLElement, layout: LayoutJson): void {
  container.textContent = "";
  for (const layer of layout.layers) {
    const row = document.createElement("div");
    row.className = "layer";
    row.dataset.sd = layer.sd;
    const label = document.createElement("div");
    label.className = "layer-sd";
    label.textContent = layer.sd;
    row.appendChild(label);
    const body = document.createElement("div");
    body.className = "layer-body";
    for (const cls of layer.classes) {
      const clsEl = document.createElement("div");
      clsEl.className = "extent-class";
      clsEl.dataset.extent = cls.filteredExtent.join(",");
      clsEl.title = `common with probe: ${cls.filteredExtent.join(", ")}`;
      for (const group of cls.groups) {
        const card = document.createElement("div");
        card.className = "group-card";
        card.dataset.groupId = String(group.id);
        card.draggable = true;
        const badge = document.createElement("span");
        badge.className = "badge";
        badge.textContent = String(group.badge);
        const name = document.createElement("span");
        name.className = "group-name";
        name.textContent = group.representative;
        card.append(badge, name);
        clsEl.appendChild(card);
      }
      body.appendChild(clsEl);
    }
    row.appendChild(body);
    container.appendChild(row);
  }
}

export function cardsById(container: HTMLElement): Map<number, HTMLElement> {
  const map = new Map<number, HTMLElement>();
  for (const el of container.querySelectorAll<HTMLElement>(".group-card")) {
    map.set(Number(el.dataset.groupId), el);
  }
  return map;
}

/** Snapshot card tops before a re-render, for move interpolation. */
export function snapshotPositions(container: HTMLElement): Map<number, number> {
  const tops = new Map<number, number>();
  for (const [id, el] of cardsById(container)) {
    tops.set(id, el.getBoundingClientRect().top);
  }
  return tops;
}

/**
 * Re-render to the new layout, then play the delta: entering cards slide
 * up/in, moved cards interpolate from their previous row, leaving cards
 * slide down/out as ghosts. The final DOM is in place before any motion
 * starts, so skipping animation changes nothing.
 */
export async function applyLayout(
  container: HTMLElement,
  layout: LayoutJson,
  delta: DeltaJson | null,
  animator: Animator,
): Promise<void> {
  const before = animator.enabled ? snapshotPositions(container) : new Map<number, number>();
  const ghosts: HTMLElement[] = [];
  if (animator.enabled && delta && delta.leaving.length) {
    const byId = cardsById(container);
    for (const id of delta.leaving) {
      const el = byId.get(id);
      if (el) {
        const rect = el.getBoundingClientRect();
        const ghost = el.cloneNode(true) as HTMLElement;
        ghost.classList.add("ghost");
        ghost.style.left = `${rect.left}px`;
        ghost.style.top = `${rect.top}px`;
        ghosts.push(ghost);
      }
    }
  }

  renderGrid(container, layout);

  if (!animator.enabled || !delta) return;

  const byId = cardsById(container);
  for (const ghost of ghosts) document.body.appendChild(ghost);
  for (const id of delta.entering) {
    byId.get(id)?.classList.add("enter-start");
  }
  const moves: [HTMLElement, number][] = [];
  for (const { id } of delta.moved) {
    const el = byId.get(id);
    const oldTop = before.get(id);
    if (el && oldTop !== undefined) {
      const dy = oldTop - el.getBoundingClientRect().top;
      if (dy !== 0) {
        el.style.transition = "none";
        el.style.transform = `translateY(${dy}px)`;
        moves.push([el, dy]);
      }
    }
  }

  await animator.run(() => {
    for (const id of delta.entering) byId.get(id)?.classList.remove("enter-start");
    for (const [el] of moves) {
      el.style.transition = `transform ${SLIDE_MS}ms ease-out`;
      el.style.transform = "translateY(0)";
    }
    for (const ghost of ghosts) ghost.classList.add("ghost-out");
  });

  for (const [el] of moves) {
    el.style.transition = "";
    el.style.transform = "";
  }
  for (const ghost of ghosts) ghost.remove();
}

/** Dim every card not in the highlighted set (hover reveal). */
export function applyDimming(container: HTMLElement, highlighted: Set<number>): void {
  for (const [id, el] of cardsById(container)) {
    el.classList.toggle("dimmed", !highlighted.has(id));
  }
}

export function clearDimming(container: HTMLElement): void {
  for (const el of container.querySelectorAll(".group-card.dimmed")) {
    el.classList.remove("dimmed");
  }
}
