/* tslint:disable */
/* eslint-disable */

/**
 * Built-in composite definitions as a JSON array.
 */
export function builtin_definitions(): string;

/**
 * SVG bar chart for one composite definition.
 */
export function chart(definition: string, reference: string): string;

/**
 * Cipher names with key and block sizes in bits, as JSON.
 */
export function ciphers(): string;

/**
 * Encrypts (or decrypts) one hex block.
 */
export function encrypt(cipher: string, key_hex: string, block_hex: string, decrypt: boolean): string;

/**
 * Scores the bundled dataset under one composite definition (JSON) and
 * returns ranked rows as JSON.
 */
export function evaluate(definition: string, reference: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly builtin_definitions: () => [number, number];
    readonly chart: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly ciphers: () => [number, number];
    readonly encrypt: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly evaluate: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
