#pragma once

namespace polyq {

// Entry point of the polyq tool. Exit codes: 0 pass, 1 failed check,
// 2 usage/input error, 3 numeric or capacity error.
int cli_main(int argc, const char* const* argv);

}  // namespace polyq
