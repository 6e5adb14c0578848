#pragma once

#include <functional>
#include <iosfwd>

namespace rise {

class ApiServer;

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInput = 2;      // invalid input or unresolvable selection
inline constexpr int kDuplicate = 3;  // run id already registered
inline constexpr int kIo = 4;         // unreadable input, unwritable output, broken store
inline constexpr int kBind = 5;       // serve: address unavailable
}  // namespace exit_code

struct CliStreams {
  std::ostream& out;
  std::ostream& err;
  // Invoked by `serve` once the socket is bound, before serving starts.
  std::function<void(ApiServer&)> on_serving;
};

/// Entry point of the `rise` command: ingest, report, plot and serve.
int run_cli(int argc, const char* const* argv, const CliStreams& io);

}  // namespace rise
