import { App } from "./app";
import { ApiClient } from "./api";
import "./style.css";

// Same-origin by default (vite dev proxies /datasets and /probes); a global
// override supports serving the UI and API from different hosts.
const base =
  (window as { __API_BASE__?: string }).__API_BASE__ ??
  import.meta.env.VITE_API_BASE ??
  "";

const root = document.getElementById("app");
if (root) {
  void new App(root, new ApiClient(base)).start();
}
