#ifndef DDPARSE_ERRORS_H_
#define DDPARSE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ddparse {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A corpus file could not be parsed as a document record.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::string reason)
      : Error(file + ": " + reason), file_(std::move(file)), reason_(std::move(reason)) {}
  const std::string& file() const { return file_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string file_;
  std::string reason_;
};

// A document parsed but violates a structural rule.
class ValidationError : public Error {
 public:
  ValidationError(std::string doc_id, std::string rule)
      : Error(doc_id + ": " + rule), doc_id_(std::move(doc_id)), rule_(std::move(rule)) {}
  const std::string& doc_id() const { return doc_id_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string doc_id_;
  std::string rule_;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("no documents") {}
};

class InvalidCount : public Error {
 public:
  using Error::Error;
};

class TerminalState : public Error {
 public:
  TerminalState() : Error("state is terminal") {}
};

class IllegalAction : public Error {
 public:
  using Error::Error;
};

class NonProjective : public Error {
 public:
  explicit NonProjective(const std::string& doc_id)
      : Error(doc_id + ": no arc-standard derivation exists") {}
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class NoTrainableTrees : public Error {
 public:
  NoTrainableTrees() : Error("no projective trees to train the structure model") {}
};

class AdapterError : public Error {
 public:
  AdapterError(int edu_id, const std::string& cause)
      : Error("edu " + std::to_string(edu_id) + ": " + cause), edu_id_(edu_id) {}
  int edu_id() const { return edu_id_; }

 private:
  int edu_id_;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Predicted and gold corpora do not cover the same documents/EDUs.
class Mismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace ddparse

#endif  // DDPARSE_ERRORS_H_
