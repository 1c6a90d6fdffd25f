import type { Envelope, ServiceClient } from './types.js';

export function httpClient(baseUrl: string): ServiceClient {
  const url = (path: string) => baseUrl.replace(/\/$/, '') + path;
  return {
    async get<T>(path: string): Promise<Envelope<T>> {
      const response = await fetch(url(path));
      return (await response.json()) as Envelope<T>;
    },
    async post<T>(path: string, body: unknown): Promise<Envelope<T>> {
      const response = await fetch(url(path), {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      });
      return (await response.json()) as Envelope<T>;
    },
  };
}
