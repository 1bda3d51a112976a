/// <reference types="vitest/config" />
import { defineConfig } from "vite";

// The dev server proxies API and WebSocket traffic to a locally running
// `scenesmith serve` (default port 8000); override with SCENESMITH_SERVER.
const backend = process.env.SCENESMITH_SERVER ?? "http://127.0.0.1:8000";

export default defineConfig({
  build: {
    target: "es2022",
    sourcemap: true,
  },
  server: {
    proxy: {
      "/health": backend,
      "/sessions": backend,
      "/search": backend,
      "/asset-info": backend,
      "/ws": { target: backend, ws: true },
    },
  },
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 90_000,
  },
});
