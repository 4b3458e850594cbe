"""Validate every golden extender exchange against the wire schema."""

import json
import pathlib
import sys

import jsonschema


def main(schema_path, corpus_dir):
    defs = json.loads(pathlib.Path(schema_path).read_text())["$defs"]

    def check(name, instance):
        jsonschema.validate(instance, {"$ref": f"#/$defs/{name}", "$defs": defs})

    count = 0
    for resp_path in sorted(pathlib.Path(corpus_dir).glob("*.response.json")):
        req = json.loads(resp_path.with_name(resp_path.name.replace("response", "request")).read_text())
        resp = json.loads(resp_path.read_text())
        endpoint = "filter" if req["path"].endswith("/filter") else "prioritize"
        if resp["status"] == 200:
            check(f"{endpoint}_response", resp["body"])
            check(f"{endpoint}_request", req["body"])
        else:
            check("error_response", resp["body"])
        count += 1
    print(f"{count} exchanges valid")
    return 0 if count else 1


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:3]))
