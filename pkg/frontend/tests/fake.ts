// Test double for fetch: records every call, answers from canned routes.

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export type Routes = Record<string, unknown | ((call: RecordedCall) => unknown)>;

export class FakeFetch {
  readonly calls: RecordedCall[] = [];

  constructor(private readonly routes: Routes) {}

  readonly fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const call: RecordedCall = {
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : null,
    };
    this.calls.push(call);
    const key = Object.keys(this.routes).find((k) => url.startsWith(k));
    if (!key) {
      return new Response(JSON.stringify({ code: "not_found", message: url }), { status: 404 });
    }
    const route = this.routes[key];
    const payload = typeof route === "function" ? (route as (c: RecordedCall) => unknown)(call) : route;
    if (payload instanceof Response) {
      return payload;
    }
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  };
}

export function errorResponse(status: number, code: string, message = ""): Response {
  return new Response(JSON.stringify({ code, message }), { status });
}
