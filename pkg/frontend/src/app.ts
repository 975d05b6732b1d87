/** Entry point: binds DOM controls to the controller and keeps the URL in
 * sync so any view can be restored from a link. */

import { ApiClient } from "./api.js";
import { ExplorerController } from "./controller.js";
import { debounce } from "./sequencer.js";
import { decodeState } from "./state.js";
import {
  renderAssortment,
  renderComposition,
  renderFront,
  renderHistogram,
} from "./render.js";
import type { ProductInfo } from "./types.js";

const SLIDER_DEBOUNCE_MS = 150;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function bootstrap(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get("api") ?? "http://127.0.0.1:8000";
  const client = new ApiClient(apiBase);
  const controller = new ExplorerController(client, decodeState(window.location.search));

  const storeSelect = el<HTMLSelectElement>("store");
  const kInput = el<HTMLInputElement>("k");
  const slider = el<HTMLInputElement>("lambda");
  const sliderValue = el<HTMLSpanElement>("lambda-value");
  const notice = el<HTMLParagraphElement>("notice");
  const products = new Map<string, ProductInfo>();

  controller.onChange((vm) => {
    if (storeSelect.options.length !== vm.stores.length) {
      storeSelect.replaceChildren(
        ...vm.stores.map((s) => new Option(`${s.id} - ${s.name}`, s.id)),
      );
    }
    if (vm.state.store !== null) storeSelect.value = vm.state.store;
    kInput.value = String(vm.state.k);
    slider.value = String(vm.state.lambda);
    sliderValue.textContent = Number(vm.state.lambda).toFixed(2);
    notice.textContent = vm.notice ?? "";

    renderFront(el("front"), vm, (index) => controller.selectPoint(index));
    renderAssortment(el("assortment"), vm, products, (pid, mode) => {
      void controller.toggleProductLock(pid, mode);
    });
    renderComposition(el("composition"), vm);

    const query = controller.queryString();
    const url = new URL(window.location.href);
    const api = url.searchParams.get("api");
    url.search = query + (api ? `&api=${encodeURIComponent(api)}` : "");
    window.history.replaceState(null, "", url.toString());
  });

  storeSelect.addEventListener("change", () => {
    void reloadProducts(storeSelect.value);
    void controller.selectStore(storeSelect.value);
  });
  kInput.addEventListener("change", () => void controller.setK(Number(kInput.value)));
  const pushLambda = debounce(
    (value: number) => void controller.setLambda(value),
    SLIDER_DEBOUNCE_MS,
  );
  slider.addEventListener("input", () => {
    sliderValue.textContent = Number(slider.value).toFixed(2);
    pushLambda(Number(slider.value));
  });

  async function reloadProducts(storeId: string): Promise<void> {
    products.clear();
    for (const product of await client.products(storeId)) {
      products.set(product.id, product);
    }
  }

  const histograms = await client.histograms();
  renderHistogram(el("higg-hist"), histograms.higg, "impact score distribution");
  renderHistogram(el("quality-hist"), histograms.quality, "quality score distribution");

  await controller.start();
  const vm = controller.viewModel();
  if (vm.state.store !== null) await reloadProducts(vm.state.store);
}

void bootstrap().catch((error) => {
  const notice = document.getElementById("notice");
  if (notice) notice.textContent = `failed to start: ${error}`;
});
