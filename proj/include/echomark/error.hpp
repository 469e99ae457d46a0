#pragma once

#include <stdexcept>
#include <string>

namespace echomark {

/// Thrown for precondition violations and I/O failures across the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace echomark
