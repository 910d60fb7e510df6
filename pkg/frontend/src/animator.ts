// Animation plumbing. The semantics live on the server; everything here is
// presentation-only, so tests (and prefers-reduced-motion users) run with
// the instant variant and land on the identical final DOM.

export const SLIDE_MS = 260;

export interface Animator {
  /** Run entering/moving/leaving effects; resolves when motion settled. */
  run(effects: () => void): Promise<void>;
  readonly enabled: boolean;
}

export class CssAnimator implements Animator {
  readonly enabled = true;

  run(effects: () => void): Promise<void> {
    return new Promise((resolve) => {
      requestAnimationFrame(() => {
        effects();
        window.setTimeout(resolve, SLIDE_MS + 40);
      });
    });
  }
}

export class InstantAnimator implements Animator {
  readonly enabled = false;

  run(): Promise<void> {
    return Promise.resolve();
  }
}

export function defaultAnimator(): Animator {
  if (
    typeof window.matchMedia === "function" &&
    window.matchMedia("(prefers-reduced-motion: reduce)").matches
  ) {
    return new InstantAnimator();
  }
  return new CssAnimator();
}
