#pragma once

// Minimal pull-style JSON reader and writer over caller-owned buffers.
// Neither side acquires memory: the reader hands out views into the input
// (or copies into fixed-capacity strings), the writer fills a span.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <span>
#include <string_view>

#include "vdl/fixed.hpp"

namespace vdl::json {

enum class JsonError {
    MalformedJson,
    CapacityExceeded,
};

class Reader {
public:
    explicit Reader(std::string_view input) : in_(input) {}

    bool fail() const { return fail_; }

    bool object_begin() { return consume('{'); }
    bool object_end() { return consume('}'); }
    bool array_begin() { return consume('['); }
    bool array_end() { return consume(']'); }
    bool comma() { return consume(','); }

    /// Peek at the next non-whitespace character without consuming it.
    char peek() {
        skip_ws();
        return pos_ < in_.size() ? in_[pos_] : '\0';
    }

    bool at_end() {
        skip_ws();
        return pos_ >= in_.size();
    }

    /// Object key: string followed by ':'.
    template <std::size_t Cap>
    bool key(FixedString<Cap>& out) {
        return string(out) && consume(':');
    }

    template <std::size_t Cap>
    bool string(FixedString<Cap>& out) {
        if (!consume('"')) {
            return false;
        }
        out.clear();
        while (pos_ < in_.size()) {
            char c = in_[pos_++];
            if (c == '"') {
                return true;
            }
            if (c == '\\') {
                if (pos_ >= in_.size()) {
                    break;
                }
                char esc = in_[pos_++];
                switch (esc) {
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    case '/': c = '/'; break;
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case 'r': c = '\r'; break;
                    default: return set_fail();
                }
            }
            if (!out.append(c)) {
                capacity_hit_ = true;
                return set_fail();
            }
        }
        return set_fail();
    }

    bool integer(std::int64_t& out) {
        skip_ws();
        std::size_t end = pos_;
        if (end < in_.size() && in_[end] == '-') {
            ++end;
        }
        while (end < in_.size() && std::isdigit(static_cast<unsigned char>(in_[end]))) {
            ++end;
        }
        // reject non-integer numerics rather than truncating them
        if (end < in_.size() && (in_[end] == '.' || in_[end] == 'e' || in_[end] == 'E')) {
            return set_fail();
        }
        auto [ptr, ec] = std::from_chars(in_.data() + pos_, in_.data() + end, out);
        if (ec != std::errc{} || ptr == in_.data() + pos_) {
            return set_fail();
        }
        pos_ = static_cast<std::size_t>(ptr - in_.data());
        return true;
    }

    bool boolean(bool& out) {
        skip_ws();
        if (in_.substr(pos_).starts_with("true")) {
            pos_ += 4;
            out = true;
            return true;
        }
        if (in_.substr(pos_).starts_with("false")) {
            pos_ += 5;
            out = false;
            return true;
        }
        return set_fail();
    }

    /// Skip any well-formed value (used to reject unknown members cleanly).
    bool skip_value(int depth = 0) {
        if (depth > 16) {
            return set_fail();
        }
        skip_ws();
        char c = peek();
        if (c == '{' || c == '[') {
            const char closer = (c == '{') ? '}' : ']';
            consume(c);
            if (peek() == closer) {
                return consume(closer);
            }
            while (true) {
                if (c == '{') {
                    FixedString<64> k;
                    if (!key(k)) {
                        return false;
                    }
                }
                if (!skip_value(depth + 1)) {
                    return false;
                }
                if (peek() == ',') {
                    consume(',');
                    continue;
                }
                return consume(closer);
            }
        }
        if (c == '"') {
            FixedString<256> s;
            return string(s);
        }
        if (c == 't' || c == 'f') {
            bool b;
            return boolean(b);
        }
        std::int64_t n;
        return integer(n);
    }

    bool capacity_hit() const { return capacity_hit_; }

private:
    bool consume(char expected) {
        skip_ws();
        if (pos_ < in_.size() && in_[pos_] == expected) {
            ++pos_;
            return true;
        }
        return set_fail();
    }

    void skip_ws() {
        while (pos_ < in_.size() &&
               std::isspace(static_cast<unsigned char>(in_[pos_]))) {
            ++pos_;
        }
    }

    bool set_fail() {
        fail_ = true;
        return false;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    bool fail_ = false;
    bool capacity_hit_ = false;
};

/// Serializer writing into a caller-provided span. Overflow latches the
/// fail flag; the caller checks once at the end.
class Writer {
public:
    explicit Writer(std::span<char> out) : out_(out) {}

    void raw(std::string_view text) {
        for (char c : text) {
            put(c);
        }
    }

    void string(std::string_view text) {
        put('"');
        for (char c : text) {
            if (c == '"' || c == '\\') {
                put('\\');
            }
            put(c);
        }
        put('"');
    }

    void boolean(bool v) { raw(v ? "true" : "false"); }

    void integer(std::int64_t v) {
        char buf[24];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        (void)ec;
        raw(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
    }

    std::size_t size() const { return len_; }
    bool overflow() const { return overflow_; }
    std::string_view view() const { return {out_.data(), len_}; }

private:
    void put(char c) {
        if (len_ >= out_.size()) {
            overflow_ = true;
            return;
        }
        out_[len_++] = c;
    }

    std::span<char> out_;
    std::size_t len_ = 0;
    bool overflow_ = false;
};

}  // namespace vdl::json
