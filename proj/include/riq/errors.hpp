#ifndef RIQ_ERRORS_HPP
#define RIQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace riq {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct FileNotFound : Error {
    explicit FileNotFound(const std::string& path) : Error("file not found: " + path) {}
};
struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string& msg) : Error("unsupported format: " + msg) {}
};
struct CorruptImage : Error {
    explicit CorruptImage(const std::string& msg) : Error("corrupt image: " + msg) {}
};
struct EmptyInput : Error {
    explicit EmptyInput(const std::string& msg) : Error("empty input: " + msg) {}
};
struct EmptyRegion : Error {
    explicit EmptyRegion(const std::string& msg) : Error("empty region: " + msg) {}
};
struct OddSide : Error {
    explicit OddSide(const std::string& msg) : Error("odd side: " + msg) {}
};
struct IncompatibleSize : Error {
    explicit IncompatibleSize(const std::string& msg) : Error("incompatible size: " + msg) {}
};
struct EmptyTrainingSet : Error {
    explicit EmptyTrainingSet(const std::string& msg) : Error("empty training set: " + msg) {}
};
struct EmptyTestSet : Error {
    explicit EmptyTestSet(const std::string& msg) : Error("empty test set: " + msg) {}
};
struct EmptyCategory : Error {
    explicit EmptyCategory(const std::string& msg) : Error("empty category: " + msg) {}
};
struct NonFiniteLoss : Error {
    explicit NonFiniteLoss(const std::string& msg) : Error("training diverged: " + msg) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};
struct UnknownKeyword : Error {
    explicit UnknownKeyword(const std::string& kw) : Error("unknown keyword: " + kw) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("i/o error: " + msg) {}
};
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error("format error: " + msg) {}
};
struct BadManifest : Error {
    BadManifest(const std::string& msg, int line)
        : Error("bad manifest (line " + std::to_string(line) + "): " + msg), line_number(line) {}
    int line_number;
};

}  // namespace riq

#endif
