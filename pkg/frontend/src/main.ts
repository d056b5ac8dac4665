import { ApiClient } from './api.js';
import { App } from './app.js';

const root = document.getElementById('app');
if (!root) throw new Error('missing #app mount point');
const base =
  document.querySelector<HTMLMetaElement>('meta[name="api-base"]')?.content ?? '';
new App(root, new ApiClient(base));
