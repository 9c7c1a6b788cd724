#include "finmcp/session.hpp"

#include <istream>
#include <ostream>

namespace finmcp {

using rpc::RpcMessage;
namespace errc = rpc::errc;

Session::Session(ToolSuite& tools, RunLog* log, SessionOptions opts)
    : tools_(tools), log_(log), opts_(std::move(opts)) {
    if (!opts_.clock) opts_.clock = wall_clock();
}

json Session::handle_initialize(const rpc::RpcMessage& msg) {
    if (initialize_received_)
        return rpc::make_error_response(msg.id, errc::kInvalidRequest,
                                        "Server already initialized")
            .to_json();
    if (msg.params.is_object() && msg.params.contains("protocolVersion")) {
        const auto& v = msg.params["protocolVersion"];
        if (!v.is_string() || v.get<std::string>() != kProtocolVersion)
            return rpc::make_error_response(
                       msg.id, errc::kInvalidParams,
                       "Unsupported protocol version; server speaks " +
                           std::string(kProtocolVersion))
                .to_json();
    }
    initialize_received_ = true;
    json result = {{"protocolVersion", kProtocolVersion},
                   {"capabilities", {{"tools", {{"listChanged", false}}}}},
                   {"serverInfo", {{"name", kServerName}, {"version", kServerVersion}}}};
    return rpc::make_response(msg.id, result).to_json();
}

json Session::handle_tools_call(const rpc::RpcMessage& msg) {
    if (!msg.params.is_object() || !msg.params.contains("name") ||
        !msg.params["name"].is_string())
        return rpc::make_error_response(msg.id, errc::kInvalidParams,
                                        "tools/call requires a string 'name' parameter")
            .to_json();
    const std::string name = msg.params["name"].get<std::string>();
    json args = msg.params.value("arguments", json::object());

    ToolCallResult r = tools_.call(name, args, log_, opts_.log_prefix, opts_.clock);
    switch (r.status) {
        case CallStatus::UnknownTool:
        case CallStatus::InvalidArgs:
            return rpc::make_error_response(msg.id, errc::kInvalidParams, r.error_message)
                .to_json();
        case CallStatus::Ok:
        case CallStatus::ExecError:
            return rpc::make_response(msg.id, r.content).to_json();
    }
    return rpc::make_error_response(msg.id, errc::kInternalError, "unreachable").to_json();
}

std::optional<json> Session::handle_message(const rpc::RpcMessage& msg) {
    if (msg.kind == rpc::MessageKind::Response) return std::nullopt;

    if (msg.kind == rpc::MessageKind::Notification) {
        if (msg.method == "notifications/initialized" && initialize_received_ &&
            phase_ == SessionPhase::AwaitingInitialize)
            phase_ = SessionPhase::Ready;
        return std::nullopt;
    }

    if (phase_ == SessionPhase::Closed)
        return rpc::make_error_response(msg.id, errc::kInvalidRequest, "Server is shut down")
            .to_json();

    if (msg.method == "initialize") return handle_initialize(msg);

    if (msg.method == "shutdown") {
        phase_ = SessionPhase::Closed;
        return rpc::make_response(msg.id, json()).to_json();
    }

    if (phase_ != SessionPhase::Ready)
        return rpc::make_error_response(msg.id, errc::kNotInitialized, "Server not initialized")
            .to_json();

    if (msg.method == "tools/list")
        return rpc::make_response(msg.id, tools_.list_tools_json()).to_json();
    if (msg.method == "tools/call") return handle_tools_call(msg);

    return rpc::make_error_response(msg.id, errc::kMethodNotFound,
                                    "Method not found: " + msg.method)
        .to_json();
}

void run_stdio_session(std::istream& in, std::ostream& out, ToolSuite& tools, RunLog* log,
                       SessionOptions opts) {
    Session session(tools, log, std::move(opts));
    for (;;) {
        rpc::FrameRead frame = rpc::read_frame(in);
        if (frame.status == rpc::FrameStatus::Eof) break;
        if (frame.status == rpc::FrameStatus::Malformed) {
            out << rpc::make_error_response(json(), rpc::errc::kParseError,
                                            "Parse error: " + frame.error)
                       .serialize()
                << "\n"
                << std::flush;
            continue;
        }
        auto reply = session.handle_message(frame.message);
        if (reply) out << reply->dump() << "\n" << std::flush;
        if (session.phase() == SessionPhase::Closed) break;
    }
}

}  // namespace finmcp
