/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const check_laws: (a: number, b: number, c: bigint, d: number) => [number, number];
export const materialize_q: (a: number, b: number, c: number) => [number, number];
export const soa_from_zero: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
