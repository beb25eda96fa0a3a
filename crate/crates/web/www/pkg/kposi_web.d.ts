/* tslint:disable */
/* eslint-disable */

/**
 * Compound, sign class, Schur test, certificate and DT screen for one k.
 */
export function analyze_matrix(text: string, scale: string, k: number): string;

/**
 * Builds the cyclic matrix and reports ρ(A^(ℓ)) and ℓ-diagonal stability.
 */
export function explore_cyclic(alphas: string, betas: string, ell: number): string;

/**
 * V(y(j)) for the squared cyclic system with a^1 = (1/2)·1 and a chosen a^2.
 */
export function squared_system_lyapunov(b1: number, b2: number, b3: number, steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze_matrix: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly explore_cyclic: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly squared_system_lyapunov: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
