/* tslint:disable */
/* eslint-disable */

/**
 * Result of a scattering solve.
 */
export class Scattering {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly converged: boolean;
    /**
     * `|u_inf|` at equispaced angles starting at 0.
     */
    readonly far_field: Float64Array;
    /**
     * Relative GMRES residuals per iteration.
     */
    readonly history: Float64Array;
    readonly iterations: number;
}

/**
 * Node coordinates `[x0, y0, x1, y1, ...]` for `two_n` nodes and grading `p`.
 */
export function graded_nodes(geo: string, p: number, two_n: number): Float64Array;

/**
 * Interior problem with the field of a point source at `(4, 4)` as exact
 * solution. Returns `[iterations, max boundary error]`.
 */
export function interior_error(geo: string, k: number, two_n: number): Float64Array;

/**
 * Sound-soft-like exterior impedance problem `Z = ik` for a plane wave
 * travelling at angle `theta`.
 */
export function scatter(geo: string, k: number, two_n: number, theta: number, tol: number): Scattering;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_scattering_free: (a: number, b: number) => void;
    readonly graded_nodes: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly interior_error: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly scatter: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly scattering_converged: (a: number) => number;
    readonly scattering_far_field: (a: number) => [number, number];
    readonly scattering_history: (a: number) => [number, number];
    readonly scattering_iterations: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
