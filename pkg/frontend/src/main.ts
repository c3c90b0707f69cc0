import { ApiClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

// served from the same origin as the service (/ui), so no base URL
const app = new App(root, new ApiClient(""));
void app.init("german").then(() => app.applyPreset());
