/**
 * Minimal declarations for dependencies that ship without their own types
 * (the @types packages are not vendored in this environment).  Only the
 * surface this package uses is declared.
 */

declare module "d3" {
  export interface NumericScale {
    (value: number): number;
    domain(d: readonly number[]): this;
    range(r: readonly number[]): this;
    nice(): this;
    ticks(count?: number): number[];
  }
  export function scaleLinear(): NumericScale;
  export function scaleLog(): NumericScale;
}

declare module "papaparse" {
  export interface ParseError {
    row?: number | undefined;
    message: string;
  }
  export interface ParseMeta {
    fields?: string[] | undefined;
  }
  export interface ParseResult<T> {
    data: T[];
    errors: ParseError[];
    meta: ParseMeta;
  }
  export interface ParseConfig {
    header?: boolean;
    dynamicTyping?: boolean;
    skipEmptyLines?: boolean;
  }
  const Papa: {
    parse<T>(input: string, config?: ParseConfig): ParseResult<T>;
  };
  export default Papa;
}
