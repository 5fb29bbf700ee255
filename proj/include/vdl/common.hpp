#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace vdl {

/// Lightweight result type used throughout the codec and parser layers.
/// Error side is a plain enum (plus optional detail text for diagnostics).
template <typename T, typename E>
class Expected {
public:
    Expected(T value) : storage_(std::move(value)) {}
    Expected(E error) : storage_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(storage_); }
    explicit operator bool() const { return ok(); }

    T& value() { return std::get<T>(storage_); }
    const T& value() const { return std::get<T>(storage_); }
    E error() const { return std::get<E>(storage_); }

    T& operator*() { return value(); }
    const T& operator*() const { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> storage_;
};

/// Thrown for programming errors and unrecoverable misuse (not for data
/// errors, which travel through Expected).
class LogicError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vdl
