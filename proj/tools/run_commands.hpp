#pragma once

// Command implementations behind the qcrit front-end.  Each command reads a
// merged flag/JSON-config parameter set, writes its data file(s) plus a run
// manifest, and returns 0; errors propagate as the shared taxonomy and are
// mapped to exit codes in main().

int run_cli(int argc, char** argv);
