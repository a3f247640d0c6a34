/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_scattering_free: (a: number, b: number) => void;
export const graded_nodes: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const interior_error: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const scatter: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const scattering_converged: (a: number) => number;
export const scattering_far_field: (a: number) => [number, number];
export const scattering_history: (a: number) => [number, number];
export const scattering_iterations: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
