import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    port: 5173,
    proxy: {
      // dev convenience: same-origin API calls land on the Python server
      "/datasets": "http://127.0.0.1:8841",
      "/probes": "http://127.0.0.1:8841",
    },
  },
  test: {
    environment: "jsdom",
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
