import { defineConfig } from "vite";

// The built bundle is served by the engine itself under /, so keep asset
// paths relative. During `vite dev`, proxy API calls to a locally running
// `fuzzylattice serve`.
export default defineConfig({
  base: "./",
  build: { outDir: "dist" },
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8420",
      "/healthz": "http://127.0.0.1:8420"
    }
  }
});
