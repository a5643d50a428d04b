#pragma once

#include <stdexcept>
#include <string>

namespace holovote {

/// An inactive member has no active representative to delegate to.
class NoRepresentativeError : public std::runtime_error {
public:
    explicit NoRepresentativeError(const std::string& what) : std::runtime_error(what) {}
};

/// Power dissemination requires at least one active (absorbing) member.
class NoAbsorberError : public std::runtime_error {
public:
    explicit NoAbsorberError(const std::string& what) : std::runtime_error(what) {}
};

/// A collective decision was requested but no active voters exist.
class NoDecisionError : public std::runtime_error {
public:
    explicit NoDecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// A ballot violates the requirements of the tally it was submitted to.
class InvalidBallotError : public std::runtime_error {
public:
    explicit InvalidBallotError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was invoked on a pool in the wrong lifecycle phase.
class PhaseViolationError : public std::logic_error {
public:
    explicit PhaseViolationError(const std::string& what) : std::logic_error(what) {}
};

/// A submitted entry collides with an existing entry id.
class ConflictError : public std::logic_error {
public:
    explicit ConflictError(const std::string& what) : std::logic_error(what) {}
};

/// A decision phase was opened on a pool without any candidate entries.
class NoCandidatesError : public std::runtime_error {
public:
    explicit NoCandidatesError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace holovote
