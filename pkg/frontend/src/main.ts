/** Bootstrap: wire the controller to the DOM and start polling.
 *
 * Configuration is limited to the server base URL, via either
 * ?server=http://host:port or a data-server attribute on #app.
 * The scenario name comes from ?scenario=, defaulting to vs_saga. */

import { ApiClient } from "./api";
import { SessionController } from "./controller";
import { renderApp } from "./render";

function config(root: HTMLElement): { server: string; scenario: string } {
  const params = new URLSearchParams(window.location.search);
  return {
    server:
      params.get("server") ??
      root.getAttribute("data-server") ??
      window.location.origin,
    scenario: params.get("scenario") ?? "vs_saga",
  };
}

document.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const { server, scenario } = config(root);
  const api = new ApiClient(server);
  const controller = new SessionController(api, {
    onChange: (state) => renderApp(root, state, controller),
  });
  controller.start(scenario).catch(() => {
    controller.setState((state) => ({ ...state, connectionLost: true }));
  });
});
