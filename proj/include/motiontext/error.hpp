#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace motiontext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path)
      : Error("file not found: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed input. `record()` is the frame/record index when known, else -1.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long record = -1)
      : Error(record >= 0 ? what + " (record " + std::to_string(record) + ")" : what),
        record_(record) {}
  long record() const noexcept { return record_; }

 private:
  long record_;
};

class LayoutUnknown : public Error {
 public:
  explicit LayoutUnknown(const std::string& name) : Error("unknown skeleton layout: " + name) {}
};

/// Well-formed but semantically invalid input. `frame()` is -1 when not frame-specific.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, long frame = -1)
      : Error(frame >= 0 ? what + " at frame " + std::to_string(frame) : what), frame_(frame) {}
  long frame() const noexcept { return frame_; }

 private:
  long frame_;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t size)
      : Error("index " + std::to_string(index) + " out of range [0, " + std::to_string(size) + ")") {}
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class MissingBankEntry : public Error {
 public:
  explicit MissingBankEntry(const std::string& key)
      : Error("variability bank has no entry for '" + key + "'"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus is empty") {}
};

class SampleTooLarge : public Error {
 public:
  SampleTooLarge(std::size_t requested, std::size_t available)
      : Error("sample size " + std::to_string(requested) + " exceeds corpus size " +
              std::to_string(available)) {}
};

}  // namespace motiontext
