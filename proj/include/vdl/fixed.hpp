#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string_view>

#include "vdl/common.hpp"

namespace vdl {

/// Fixed-capacity string. Never touches the heap; overflowing appends are
/// reported through the return value of assign()/append().
template <std::size_t Cap>
class FixedString {
public:
    FixedString() = default;
    FixedString(std::string_view sv) { (void)assign(sv); }

    bool assign(std::string_view sv) {
        if (sv.size() > Cap) {
            return false;
        }
        std::memcpy(buf_.data(), sv.data(), sv.size());
        len_ = sv.size();
        return true;
    }

    bool append(char c) {
        if (len_ >= Cap) {
            return false;
        }
        buf_[len_++] = c;
        return true;
    }

    void clear() { len_ = 0; }

    std::string_view view() const { return {buf_.data(), len_}; }
    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }
    static constexpr std::size_t capacity() { return Cap; }

    bool operator==(const FixedString& other) const { return view() == other.view(); }
    bool operator==(std::string_view sv) const { return view() == sv; }

private:
    std::array<char, Cap> buf_{};
    std::size_t len_ = 0;
};

/// Fixed-capacity vector with value semantics. push_back past capacity
/// returns false instead of growing.
template <typename T, std::size_t Cap>
class FixedVec {
public:
    bool push_back(const T& v) {
        if (len_ >= Cap) {
            return false;
        }
        items_[len_++] = v;
        return true;
    }

    void clear() { len_ = 0; }

    T& operator[](std::size_t i) { return items_[i]; }
    const T& operator[](std::size_t i) const { return items_[i]; }

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }
    static constexpr std::size_t capacity() { return Cap; }

    T* begin() { return items_.data(); }
    T* end() { return items_.data() + len_; }
    const T* begin() const { return items_.data(); }
    const T* end() const { return items_.data() + len_; }

    bool operator==(const FixedVec& other) const {
        if (len_ != other.len_) {
            return false;
        }
        for (std::size_t i = 0; i < len_; ++i) {
            if (!(items_[i] == other.items_[i])) {
                return false;
            }
        }
        return true;
    }

private:
    std::array<T, Cap> items_{};
    std::size_t len_ = 0;
};

}  // namespace vdl
