import { Api } from "./api.js";
import { createApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "http://127.0.0.1:8000";
const root = document.getElementById("app");
if (root == null) {
  throw new Error("missing #app element");
}
createApp(root, new Api(base));
