#include "doctest.h"

#include "finmcp/jsonrpc.hpp"

#include <sstream>

using namespace finmcp::rpc;

TEST_CASE("parse_message classifies requests, notifications and responses") {
    auto req = parse_message(R"({"jsonrpc":"2.0","id":1,"method":"tools/list","params":{}})");
    REQUIRE(req);
    CHECK(req->kind == MessageKind::Request);
    CHECK(req->id == json(1));
    CHECK(req->method == "tools/list");
    CHECK(req->params.is_object());

    auto string_id = parse_message(R"({"jsonrpc":"2.0","id":"a7","method":"x"})");
    REQUIRE(string_id);
    CHECK(string_id->kind == MessageKind::Request);
    CHECK(string_id->id == json("a7"));

    auto notif = parse_message(R"({"jsonrpc":"2.0","method":"notifications/initialized"})");
    REQUIRE(notif);
    CHECK(notif->kind == MessageKind::Notification);
    CHECK(notif->id.is_null());

    // a null id downgrades to a notification rather than a malformed frame
    auto null_id = parse_message(R"({"jsonrpc":"2.0","id":null,"method":"x"})");
    REQUIRE(null_id);
    CHECK(null_id->kind == MessageKind::Notification);

    auto result = parse_message(R"({"jsonrpc":"2.0","id":2,"result":{"ok":true}})");
    REQUIRE(result);
    CHECK(result->kind == MessageKind::Response);
    CHECK(result->has_result);
    CHECK_FALSE(result->has_error);

    auto error = parse_message(R"({"jsonrpc":"2.0","id":2,"error":{"code":-32601,"message":"m"}})");
    REQUIRE(error);
    CHECK(error->kind == MessageKind::Response);
    CHECK(error->has_error);
    CHECK(error->error["code"] == -32601);
}

TEST_CASE("parse_message rejects structurally invalid frames") {
    std::string why;
    CHECK_FALSE(parse_message("{nope", &why));
    CHECK(why == "not valid JSON");
    CHECK_FALSE(parse_message("[1,2]", &why));
    CHECK(why == "frame is not a JSON object");
    CHECK_FALSE(parse_message(R"({"id":1,"method":"x"})", &why));
    CHECK(why == "missing jsonrpc version");
    CHECK_FALSE(parse_message(R"({"jsonrpc":"1.0","id":1,"method":"x"})", &why));
    CHECK_FALSE(parse_message(R"({"jsonrpc":"2.0","id":1,"method":7})", &why));
    CHECK(why == "method must be a string");
    CHECK_FALSE(parse_message(R"({"jsonrpc":"2.0","id":true,"method":"x"})", &why));
    CHECK(why == "id must be an integer or string");
    // responses carry exactly one of result/error
    CHECK_FALSE(parse_message(R"({"jsonrpc":"2.0","id":1,"result":1,"error":{}})", &why));
    CHECK_FALSE(parse_message(R"({"jsonrpc":"2.0","id":1})", &why));
}

TEST_CASE("serialization omits absent params and round-trips") {
    RpcMessage req = make_request(1, "tools/list");
    CHECK(req.serialize() == R"({"id":1,"jsonrpc":"2.0","method":"tools/list"})");

    RpcMessage with_params = make_request(2, "tools/call", json{{"name", "t"}});
    auto back = parse_message(with_params.serialize());
    REQUIRE(back);
    CHECK(back->method == "tools/call");
    CHECK(back->params == json{{"name", "t"}});

    RpcMessage resp = make_response(3, json{{"ok", true}});
    auto rback = parse_message(resp.serialize());
    REQUIRE(rback);
    CHECK(rback->kind == MessageKind::Response);
    CHECK(rback->result == json{{"ok", true}});

    // parse errors respond with a null id per JSON-RPC 2.0
    RpcMessage err = make_error_response(json(), errc::kParseError, "Parse error");
    CHECK(err.serialize() ==
          R"({"error":{"code":-32700,"message":"Parse error"},"id":null,"jsonrpc":"2.0"})");
}

TEST_CASE("read_frame walks newline-delimited frames") {
    std::istringstream in(
        "\n"
        "   \n"
        "{\"jsonrpc\":\"2.0\",\"id\":1,\"method\":\"a\"}\r\n"
        "not json\n"
        "{\"jsonrpc\":\"2.0\",\"method\":\"b\"}\n");

    FrameRead first = read_frame(in);
    CHECK(first.status == FrameStatus::Ok);  // blank lines skipped, CR stripped
    CHECK(first.message.method == "a");

    FrameRead second = read_frame(in);
    CHECK(second.status == FrameStatus::Malformed);
    CHECK(second.raw == "not json");
    CHECK(second.error == "not valid JSON");

    FrameRead third = read_frame(in);
    CHECK(third.status == FrameStatus::Ok);
    CHECK(third.message.kind == MessageKind::Notification);

    CHECK(read_frame(in).status == FrameStatus::Eof);
}

TEST_CASE("write_frame emits one line per message") {
    std::ostringstream out;
    write_frame(out, make_request(5, "ping"));
    CHECK(out.str() == R"({"id":5,"jsonrpc":"2.0","method":"ping"})"
                       "\n");
}
