#pragma once

namespace lieclass {

// Entry point of the lieclass tool. Exit codes: 0 success / all checks pass,
// 1 usage error, 2 mathematical finding (non-closed basis, failed verdicts,
// audit anomalies), 3 parse error in an input expression or document.
int run_cli(int argc, char** argv);

}  // namespace lieclass
