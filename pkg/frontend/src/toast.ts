/** Transient notifications pinned to the upper-right corner. */
export class ToastTray {
  readonly el: HTMLElement;

  constructor(doc: Document, private readonly ttlMs = 4000) {
    this.el = doc.createElement("div");
    this.el.className = "toasts";
    this.el.style.position = "fixed";
    this.el.style.top = "12px";
    this.el.style.right = "12px";
    this.el.style.zIndex = "10";
  }

  show(text: string, severity: "warning" | "error" = "warning"): HTMLElement {
    const toast = this.el.ownerDocument.createElement("div");
    toast.className = `toast ${severity}`;
    toast.textContent = text;
    this.el.appendChild(toast);
    setTimeout(() => toast.remove(), this.ttlMs);
    return toast;
  }
}
