import { App } from "./app";

const base = import.meta.env.VITE_API_BASE ?? window.location.origin;
new App(base);
