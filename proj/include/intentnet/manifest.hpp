#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "intentnet/xml.hpp"

namespace intentnet {

enum class IntentKind { Action, Category, Extra };
enum class Label { Malicious, Benign, Unlabeled };

const char* intent_kind_name(IntentKind k);
IntentKind intent_kind_from(std::string_view s);
const char* label_name(Label l);
Label label_from(std::string_view s);

// One intent vocabulary entry. Identity is (kind, name); `raw` keeps the
// first attribute string the key was seen as, for round-trip checks and
// report readability.
struct IntentKey {
  IntentKind kind;
  std::string name;  // normalized: non-empty, [A-Z0-9_] only
  std::string raw;

  friend bool operator==(const IntentKey& a, const IntentKey& b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator<(const IntentKey& a, const IntentKey& b) {
    if (a.kind != b.kind) {
      return a.kind < b.kind;
    }
    return a.name < b.name;
  }
};

// Normalizes a declared intent string: drops the dot-separated prefix up to
// and including the last *interior* kind token ("action", "category" or
// "extra" followed by a dot), uppercases the remainder and maps every
// character outside [A-Z0-9_] to '_'. A kind word as the final segment is
// part of the name, not a prefix, so "com.foo.action" -> COM_FOO_ACTION.
//   android.intent.action.BOOT_COMPLETED -> BOOT_COMPLETED
//   com.vendor.intent.action.foo.bar     -> FOO_BAR
// Throws Error(EmptyName) when the input, or what remains of it, is empty.
std::string normalize_intent_name(std::string_view raw);

// Multiset of intent keys declared by one app.
using IntentCounts = std::map<IntentKey, std::uint64_t>;

struct AppSample {
  std::string app_id;
  Label label = Label::Unlabeled;
  IntentCounts intents;
};

struct Corpus {
  std::vector<AppSample> samples;       // labels-file row order
  std::size_t malicious_count = 0;
  std::size_t benign_count = 0;
  std::size_t ignored_files = 0;        // manifests on disk without a label
};

// Extracts the intent multiset from one decoded manifest document:
//   * every <action>/<category> element inside an <intent-filter> counts its
//     name attribute once per occurrence;
//   * every attribute value anywhere matching *.intent.extra.* counts as an
//     Extra key.
// Requires the root element to be <manifest> (Error(MissingManifestRoot)).
IntentCounts extract_intents(const XmlElement& root);

// Convenience: parse + extract. Throws Error(MalformedXml) on bad input.
IntentCounts parse_manifest(std::string_view xml_text);

// Reads `labels_file` (CSV: app_id,label with label in {malicious,benign})
// and loads `<manifest_dir>/<app_id>.xml` for every row. `workers` > 1
// parses files concurrently; results are merged in labels-file order either
// way. Errors: LabelFileMissing, UnknownLabelValue, DuplicateAppId,
// ManifestFileMissing, plus parse errors tagged with the offending file.
Corpus load_corpus(const std::filesystem::path& manifest_dir,
                   const std::filesystem::path& labels_file,
                   unsigned workers = 1);

// FNV-1a 64 over the corpus content (app ids, labels, intent multisets);
// used to stamp artifacts derived from a corpus.
std::string corpus_fingerprint(const Corpus& corpus);

}  // namespace intentnet
