/** Input file does not match the producing command's documented schema. */
export class SchemaMismatch extends Error {
  readonly file: string;
  readonly detail: string;

  constructor(file: string, detail: string) {
    super(`${file}: ${detail}`);
    this.name = "SchemaMismatch";
    this.file = file;
    this.detail = detail;
  }
}
