#pragma once

namespace vdm {

// Exit codes: 0 success, 1 usage, 2 data error, 3 statistical degeneracy.
int run_cli(int argc, char** argv);

} // namespace vdm
