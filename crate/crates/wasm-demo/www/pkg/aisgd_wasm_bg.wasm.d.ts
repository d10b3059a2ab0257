/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curves_free: (a: number, b: number) => void;
export const __wbg_fixedpointview_free: (a: number, b: number) => void;
export const __wbg_get_fixedpointview_bound: (a: number) => number;
export const __wbg_get_fixedpointview_iterations: (a: number) => number;
export const __wbg_get_fixedpointview_s_n: (a: number) => number;
export const __wbg_get_fixedpointview_u_star: (a: number) => number;
export const __wbg_set_fixedpointview_bound: (a: number, b: number) => void;
export const __wbg_set_fixedpointview_iterations: (a: number, b: number) => void;
export const __wbg_set_fixedpointview_s_n: (a: number, b: number) => void;
export const __wbg_set_fixedpointview_u_star: (a: number, b: number) => void;
export const curves_count: (a: number) => number;
export const curves_label: (a: number, b: number) => [number, number];
export const curves_series: (a: number, b: number) => [number, number];
export const curves_xs: (a: number) => [number, number];
export const fixed_point: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const fixedpointview_hs: (a: number) => [number, number];
export const fixedpointview_us: (a: number) => [number, number];
export const lambda_sweep: (a: number, b: number, c: number) => [number, number, number];
export const stability_traces: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
