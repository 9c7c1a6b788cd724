#pragma once
// JSON-RPC 2.0 message model and newline-delimited framing.
//
// One frame = one line of UTF-8 JSON terminated by '\n'. A frame is exactly
// one of request (method + id), notification (method, no id) or response
// (result/error + id).

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace finmcp::rpc {

using json = nlohmann::json;

// JSON-RPC 2.0 error codes plus the MCP-specific ones this server emits.
namespace errc {
constexpr int kParseError = -32700;
constexpr int kInvalidRequest = -32600;
constexpr int kMethodNotFound = -32601;
constexpr int kInvalidParams = -32602;
constexpr int kInternalError = -32603;
constexpr int kNotInitialized = -32002;
}  // namespace errc

enum class MessageKind { Request, Notification, Response };

struct RpcMessage {
    MessageKind kind = MessageKind::Request;
    json id;  // null for notifications
    std::string method;
    json params;        // null when absent
    json result;        // responses only
    json error;         // responses only
    bool has_result = false;
    bool has_error = false;

    json to_json() const;
    std::string serialize() const { return to_json().dump(); }
};

// Parses one frame into a message. Returns nullopt when the text is not a
// structurally valid JSON-RPC 2.0 message; `why` receives the reason.
std::optional<RpcMessage> parse_message(const std::string& frame, std::string* why = nullptr);

RpcMessage make_request(json id, std::string method, json params = json());
RpcMessage make_notification(std::string method, json params = json());
RpcMessage make_response(json id, json result);
RpcMessage make_error_response(json id, int code, const std::string& message);

enum class FrameStatus { Ok, Malformed, Eof };

struct FrameRead {
    FrameStatus status = FrameStatus::Eof;
    RpcMessage message;     // valid when status == Ok
    std::string raw;        // the raw line (Ok and Malformed)
    std::string error;      // parse failure detail (Malformed)
};

// Consumes exactly one newline-delimited frame from the stream. Blank lines
// are skipped, not treated as frames.
FrameRead read_frame(std::istream& in);

// Writes one frame: serialized message plus the terminating newline.
void write_frame(std::ostream& out, const RpcMessage& msg);

}  // namespace finmcp::rpc
