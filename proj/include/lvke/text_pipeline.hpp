#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lvke {

struct Document {
  std::string id;
  std::string raw_text;
  // Sentence i (0-based here) is sentence number i + 1 in the 1-based
  // numbering used for the first-sentence index z.
  std::vector<std::string> sentences;
};

// Builds a Document by splitting raw_text into sentences.
Document make_document(std::string id, std::string raw_text);

struct FilterLists {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> common_adjectives;
  std::unordered_set<std::string> reporting_verbs;
  std::unordered_set<std::string> determiners;
  std::unordered_set<std::string> functional_words;

  bool contains(const std::string& token) const;

  // The lists shipped with the library.
  static FilterLists defaults();

  // Loads `<dir>/{stopwords,common_adjectives,reporting_verbs,determiners,
  // functional_words}.txt`. A missing file keeps the bundled default for that
  // list.
  static FilterLists load_directory(const std::filesystem::path& dir);
};

// One token per line, `#` starts a comment, blank lines ignored. Entries are
// lowercased and trimmed.
std::unordered_set<std::string> read_word_list(const std::filesystem::path& path);

std::vector<std::string> split_sentences(std::string_view raw_text);

std::vector<std::string> tokenize(std::string_view sentence);

bool keep_token(std::string_view token, const FilterLists& lists);

// Porter (1980) stemmer. Tokens containing non-ASCII bytes are returned as-is.
std::string stem(std::string_view token);

// Part-of-speech annotation aligned one-to-one with the tokenizer output of a
// whole document (sentence by sentence).
struct PosAnnotation {
  std::vector<std::string> surfaces;
  std::vector<std::string> tags;
};

PosAnnotation read_pos_annotation(const std::filesystem::path& path);

// Keeps tokens whose tag starts with NN (nouns) or JJ (adjectives).
bool is_noun_or_adjective(std::string_view tag);

struct CandidateVocab {
  std::vector<std::string> stems;                // order of first appearance
  std::vector<std::size_t> first_sentence;       // z, 1-based, parallel to stems
  std::vector<std::size_t> first_position;       // 0-based position in stream
  std::vector<std::size_t> term_frequency;
  std::vector<std::size_t> stream;               // stem indices, filtered order
  std::vector<std::size_t> stream_sentence;      // 1-based sentence per stream slot
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return stems.size(); }
  std::size_t sentence_count = 0;  // r
};

// When `pos` is given, tokens whose aligned tag is not a noun or adjective are
// dropped before the regular filter.
CandidateVocab build_candidate_index(const Document& doc, const FilterLists& lists,
                                     const PosAnnotation* pos = nullptr);

}  // namespace lvke
