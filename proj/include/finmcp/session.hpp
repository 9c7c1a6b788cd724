#pragma once

#include "finmcp/jsonrpc.hpp"
#include "finmcp/tools.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace finmcp {

inline constexpr const char* kProtocolVersion = "2024-11-05";
inline constexpr const char* kServerName = "finmcp-server";
inline constexpr const char* kServerVersion = "0.1.0";

enum class SessionPhase { AwaitingInitialize, Ready, Closed };

struct SessionOptions {
    std::string log_prefix = "session";
    ClockFn clock;  // defaults to wall clock
};

// One MCP session: monotone AwaitingInitialize -> Ready -> Closed, requests
// processed sequentially. Transport-independent; run_stdio_session adapts it
// to newline-delimited stdio frames.
class Session {
public:
    Session(ToolSuite& tools, RunLog* log = nullptr, SessionOptions opts = {});

    // Returns the response for requests, nullopt for notifications.
    std::optional<json> handle_message(const rpc::RpcMessage& msg);

    SessionPhase phase() const { return phase_; }

private:
    json handle_initialize(const rpc::RpcMessage& msg);
    json handle_tools_call(const rpc::RpcMessage& msg);

    ToolSuite& tools_;
    RunLog* log_;
    SessionOptions opts_;
    SessionPhase phase_ = SessionPhase::AwaitingInitialize;
    bool initialize_received_ = false;
};

// Reads frames until EOF or shutdown. Malformed frames get a parse-error
// response and the session continues; EOF always ends it.
void run_stdio_session(std::istream& in, std::ostream& out, ToolSuite& tools,
                       RunLog* log = nullptr, SessionOptions opts = {});

}  // namespace finmcp
