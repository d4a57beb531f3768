#pragma once

#include <stdexcept>
#include <string>

namespace absaforge {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document. Carries the 1-based line/column of the offending byte.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int col)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

// A record or file violates a declared schema (JSONL field missing, wrong type, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Bad or inconsistent user configuration (missing paths, wrong exemplar count, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A value failed a runtime validation rule (empty sanitized aspect, absent substring, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Network-level failure talking to a chat-completion backend.
class TransportError : public Error {
public:
    TransportError(const std::string& msg, int status, bool retryable)
        : Error(msg), status_(status), retryable_(retryable) {}

    // Last HTTP status observed; 0 when the failure happened below HTTP.
    int status() const { return status_; }
    bool retryable() const { return retryable_; }

private:
    int status_;
    bool retryable_;
};

// An internal API contract was broken by the caller (shape mismatch, tau <= 0, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

}  // namespace absaforge
