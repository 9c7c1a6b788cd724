#include "finmcp/jsonrpc.hpp"

#include <istream>
#include <ostream>

namespace finmcp::rpc {

json RpcMessage::to_json() const {
    json j;
    j["jsonrpc"] = "2.0";
    switch (kind) {
        case MessageKind::Request:
            j["id"] = id;
            j["method"] = method;
            if (!params.is_null()) j["params"] = params;
            break;
        case MessageKind::Notification:
            j["method"] = method;
            if (!params.is_null()) j["params"] = params;
            break;
        case MessageKind::Response:
            j["id"] = id;
            if (has_error)
                j["error"] = error;
            else
                j["result"] = result;
            break;
    }
    return j;
}

std::optional<RpcMessage> parse_message(const std::string& frame, std::string* why) {
    json j = json::parse(frame, nullptr, false);
    if (j.is_discarded()) {
        if (why) *why = "not valid JSON";
        return std::nullopt;
    }
    if (!j.is_object()) {
        if (why) *why = "frame is not a JSON object";
        return std::nullopt;
    }
    if (j.value("jsonrpc", "") != "2.0") {
        if (why) *why = "missing jsonrpc version";
        return std::nullopt;
    }
    RpcMessage msg;
    const bool has_id = j.contains("id") && !j["id"].is_null();
    if (has_id) {
        const auto& id = j["id"];
        if (!id.is_number_integer() && !id.is_string()) {
            if (why) *why = "id must be an integer or string";
            return std::nullopt;
        }
        msg.id = id;
    }
    if (j.contains("method")) {
        if (!j["method"].is_string()) {
            if (why) *why = "method must be a string";
            return std::nullopt;
        }
        msg.method = j["method"].get<std::string>();
        if (j.contains("params")) msg.params = j["params"];
        msg.kind = has_id ? MessageKind::Request : MessageKind::Notification;
        return msg;
    }
    msg.has_result = j.contains("result");
    msg.has_error = j.contains("error");
    if (msg.has_result == msg.has_error) {
        if (why) *why = "response must carry exactly one of result or error";
        return std::nullopt;
    }
    if (!has_id && !j["id"].is_null()) {
        if (why) *why = "response requires an id";
        return std::nullopt;
    }
    msg.kind = MessageKind::Response;
    if (msg.has_result) msg.result = j["result"];
    if (msg.has_error) msg.error = j["error"];
    return msg;
}

RpcMessage make_request(json id, std::string method, json params) {
    RpcMessage m;
    m.kind = MessageKind::Request;
    m.id = std::move(id);
    m.method = std::move(method);
    m.params = std::move(params);
    return m;
}

RpcMessage make_notification(std::string method, json params) {
    RpcMessage m;
    m.kind = MessageKind::Notification;
    m.method = std::move(method);
    m.params = std::move(params);
    return m;
}

RpcMessage make_response(json id, json result) {
    RpcMessage m;
    m.kind = MessageKind::Response;
    m.id = std::move(id);
    m.result = std::move(result);
    m.has_result = true;
    return m;
}

RpcMessage make_error_response(json id, int code, const std::string& message) {
    RpcMessage m;
    m.kind = MessageKind::Response;
    m.id = std::move(id);
    m.error = json{{"code", code}, {"message", message}};
    m.has_error = true;
    return m;
}

FrameRead read_frame(std::istream& in) {
    FrameRead fr;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (c != ' ' && c != '\t') {
                blank = false;
                break;
            }
        if (blank) continue;
        fr.raw = line;
        std::string why;
        if (auto msg = parse_message(line, &why)) {
            fr.status = FrameStatus::Ok;
            fr.message = std::move(*msg);
        } else {
            fr.status = FrameStatus::Malformed;
            fr.error = why;
        }
        return fr;
    }
    fr.status = FrameStatus::Eof;
    return fr;
}

void write_frame(std::ostream& out, const RpcMessage& msg) {
    out << msg.serialize() << "\n";
    out.flush();
}

}  // namespace finmcp::rpc
