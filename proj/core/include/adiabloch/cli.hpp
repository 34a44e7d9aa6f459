#pragma once

namespace adiabloch {

// Exit codes: 0 success, 1 numerical failure, 2 usage error.
int cli_main(int argc, char** argv);

}  // namespace adiabloch
