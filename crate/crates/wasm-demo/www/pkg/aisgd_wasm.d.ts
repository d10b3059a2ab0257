/* tslint:disable */
/* eslint-disable */

/**
 * A family of curves over a shared x axis. Non-finite values mark divergence.
 */
export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    count(): number;
    label(i: number): string;
    series(i: number): Float64Array;
    xs(): Float64Array;
}

/**
 * One implicit step in the coordinate `u` along `x`: the map
 * `u ↦ γ·g(u0 + u·c)` sampled over the search bracket, and its fixed point.
 */
export class FixedPointView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    hs(): Float64Array;
    us(): Float64Array;
    bound: number;
    iterations: number;
    s_n: number;
    u_star: number;
}

/**
 * `c = ‖x‖²` and `u0 = xᵀθ` are set directly through a one-dimensional
 * sample `x = √c`, `θ = u0/√c`.
 */
export function fixed_point(family: string, u0: number, c: number, y: number, gamma: number): FixedPointView;

/**
 * Final test error of aisgd and asgd on a logistic task for each λ in
 * `{10⁻², …, 10⁻⁶}`; `xs` holds `log10 λ`.
 */
export function lambda_sweep(eta0_scale: number, n: number, seed: number): Curves;

/**
 * Excess-risk traces of aisgd, asgd and isgd with constant rate `scale/R²`
 * on a 20-dimensional linear task, evaluated at log-spaced checkpoints.
 */
export function stability_traces(scale: number, n: number, seed: number): Curves;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly __wbg_fixedpointview_free: (a: number, b: number) => void;
    readonly __wbg_get_fixedpointview_bound: (a: number) => number;
    readonly __wbg_get_fixedpointview_iterations: (a: number) => number;
    readonly __wbg_get_fixedpointview_s_n: (a: number) => number;
    readonly __wbg_get_fixedpointview_u_star: (a: number) => number;
    readonly __wbg_set_fixedpointview_bound: (a: number, b: number) => void;
    readonly __wbg_set_fixedpointview_iterations: (a: number, b: number) => void;
    readonly __wbg_set_fixedpointview_s_n: (a: number, b: number) => void;
    readonly __wbg_set_fixedpointview_u_star: (a: number, b: number) => void;
    readonly curves_count: (a: number) => number;
    readonly curves_label: (a: number, b: number) => [number, number];
    readonly curves_series: (a: number, b: number) => [number, number];
    readonly curves_xs: (a: number) => [number, number];
    readonly fixed_point: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly fixedpointview_hs: (a: number) => [number, number];
    readonly fixedpointview_us: (a: number) => [number, number];
    readonly lambda_sweep: (a: number, b: number, c: number) => [number, number, number];
    readonly stability_traces: (a: number, b: number, c: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
