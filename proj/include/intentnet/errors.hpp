#pragma once

#include <stdexcept>
#include <string>

namespace intentnet {

// Every failure the library can signal, by identity rather than by message
// text, so callers and tests can match on the condition.
enum class Errc {
  MalformedXml,
  MissingManifestRoot,
  EmptyName,
  LabelFileMissing,
  ManifestFileMissing,
  UnknownLabelValue,
  DuplicateAppId,
  EmptyCorpus,
  MissingClass,
  ClassTooSmall,
  SingleClass,
  BothZero,
  ShapeMismatch,
  ConstraintViolation,
  EmptyHiddenList,
  NonFiniteGradient,
  InvalidConfig,
  IoFailure,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::MalformedXml: return "malformed_xml";
    case Errc::MissingManifestRoot: return "missing_manifest_root";
    case Errc::EmptyName: return "empty_name";
    case Errc::LabelFileMissing: return "label_file_missing";
    case Errc::ManifestFileMissing: return "manifest_file_missing";
    case Errc::UnknownLabelValue: return "unknown_label_value";
    case Errc::DuplicateAppId: return "duplicate_app_id";
    case Errc::EmptyCorpus: return "empty_corpus";
    case Errc::MissingClass: return "missing_class";
    case Errc::ClassTooSmall: return "class_too_small";
    case Errc::SingleClass: return "single_class";
    case Errc::BothZero: return "both_zero";
    case Errc::ShapeMismatch: return "shape_mismatch";
    case Errc::ConstraintViolation: return "constraint_violation";
    case Errc::EmptyHiddenList: return "empty_hidden_list";
    case Errc::NonFiniteGradient: return "non_finite_gradient";
    case Errc::InvalidConfig: return "invalid_config";
    case Errc::IoFailure: return "io_failure";
  }
  return "unknown_error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace intentnet
