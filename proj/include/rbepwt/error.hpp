#pragma once

#include <stdexcept>
#include <string>

namespace rbepwt {

enum class ErrorKind {
    InvalidArgument,  // caller passed something outside an operation's domain
    Format,           // malformed file or stream
    Precondition,     // well-formed input that an operation cannot accept
    Io,               // filesystem failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace rbepwt
