#include "lvke/text_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lvke/error.hpp"
#include "unicode.hpp"

namespace lvke {
namespace {

constexpr std::array<std::string_view, 39> kAbbreviations{
    "fig",  "figs", "eq",    "eqs",  "sec",   "secs",  "e.g",  "i.e",  "al",
    "cf",   "vs",   "dr",    "mr",   "mrs",   "ms",    "prof", "st",   "jr",    "sr",
    "no",   "nos",  "vol",   "pp",   "p",     "ref",   "refs", "tab",  "approx", "resp",
    "inc",  "ltd",  "co",    "corp", "dept",  "univ",  "ch",   "chap", "ed",    "eds",
};

std::string_view trim(std::string_view s) {
  const auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
  });
  return out;
}

// The word ending right before text[dot] (the terminating '.').
bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !is_ascii_space(text[begin - 1])) --begin;
  std::string_view word = text.substr(begin, dot - begin);
  while (!word.empty() && is_opener(word.front())) word.remove_prefix(1);
  if (word.empty()) return false;
  const std::string lower = ascii_lower(word);
  // Initials such as "J. Smith"; a lower-case letter ends a sentence.
  if (word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]))) return true;
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end())
    return true;
  // "et al." spans two words.
  if (lower == "al" && begin >= 3 && ascii_lower(text.substr(begin - 3, 2)) == "et") return true;
  return false;
}

// True when text[pos] starts something that may open a new sentence.
bool opens_sentence(std::string_view text, std::size_t pos) {
  while (pos < text.size() && is_opener(text[pos])) ++pos;
  if (pos >= text.size()) return false;
  const char c = text[pos];
  if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  if (static_cast<unsigned char>(c) >= 0x80) {
    std::size_t p = pos;
    const char32_t cp = unicode::decode(text, p);
    return unicode::to_lower(cp) != cp;
  }
  return false;
}

// Length of a paragraph break (newline, optional blanks, newline) at pos.
std::size_t paragraph_break(std::string_view text, std::size_t pos) {
  if (text[pos] != '\n') return 0;
  std::size_t p = pos + 1;
  while (p < text.size() && (text[p] == ' ' || text[p] == '\t' || text[p] == '\r')) ++p;
  if (p < text.size() && text[p] == '\n') return p + 1 - pos;
  return 0;
}

std::string lowercase_utf8(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) unicode::append_utf8(out, unicode::to_lower(unicode::decode(s, pos)));
  return out;
}

}  // namespace

bool FilterLists::contains(const std::string& token) const {
  return stopwords.count(token) || common_adjectives.count(token) ||
         reporting_verbs.count(token) || determiners.count(token) ||
         functional_words.count(token);
}

std::unordered_set<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read word list " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto entry = trim(line);
    if (!entry.empty()) words.insert(lowercase_utf8(entry));
  }
  return words;
}

FilterLists FilterLists::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::Io, "filter list directory not found: " + dir.string());
  FilterLists lists = defaults();
  const auto load = [&](const char* name, std::unordered_set<std::string>& target) {
    const auto path = dir / name;
    if (std::filesystem::exists(path)) target = read_word_list(path);
  };
  load("stopwords.txt", lists.stopwords);
  load("common_adjectives.txt", lists.common_adjectives);
  load("reporting_verbs.txt", lists.reporting_verbs);
  load("determiners.txt", lists.determiners);
  load("functional_words.txt", lists.functional_words);
  return lists;
}

std::vector<std::string> split_sentences(std::string_view raw_text) {
  if (trim(raw_text).empty()) throw Error(ErrorCode::EmptyDocument, "document has no text");

  std::vector<std::string> sentences;
  const auto emit = [&](std::size_t begin, std::size_t end) {
    const auto s = trim(raw_text.substr(begin, end - begin));
    if (!s.empty()) sentences.emplace_back(s);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    if (const std::size_t brk = paragraph_break(raw_text, i); brk > 0) {
      emit(start, i);
      i += brk;
      start = i;
      continue;
    }
    if (!is_terminator(raw_text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < raw_text.size() && (is_terminator(raw_text[j]) || is_closer(raw_text[j]))) ++j;
    if (j >= raw_text.size() || !is_ascii_space(raw_text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < raw_text.size() && is_ascii_space(raw_text[k])) ++k;
    const bool single_dot = raw_text[i] == '.' && (j == i + 1 || !is_terminator(raw_text[i + 1]));
    if (k < raw_text.size() && opens_sentence(raw_text, k) &&
        !(single_dot && is_abbreviation(raw_text, i))) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  emit(start, raw_text.size());
  return sentences;
}

Document make_document(std::string id, std::string raw_text) {
  Document doc;
  doc.id = std::move(id);
  doc.sentences = split_sentences(raw_text);
  doc.raw_text = std::move(raw_text);
  return doc;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t pos = 0; pos < sentence.size();) {
    const char32_t cp = unicode::decode(sentence, pos);
    if (unicode::is_alnum(cp)) {
      unicode::append_utf8(current, unicode::to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool keep_token(std::string_view token, const FilterLists& lists) {
  if (unicode::length(token) < 2) return false;
  bool all_digits = true;
  for (std::size_t pos = 0; pos < token.size() && all_digits;)
    all_digits = unicode::is_digit(unicode::decode(token, pos));
  if (all_digits) return false;
  return !lists.contains(std::string(token));
}

bool is_noun_or_adjective(std::string_view tag) {
  return tag.substr(0, 2) == "NN" || tag.substr(0, 2) == "JJ";
}

PosAnnotation read_pos_annotation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read POS annotation " + path.string());
  PosAnnotation pos;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::PosMisaligned,
                  path.string() + ":" + std::to_string(line_no) + ": expected surface<TAB>POS");
    pos.surfaces.push_back(lowercase_utf8(line.substr(0, tab)));
    pos.tags.push_back(line.substr(tab + 1));
  }
  return pos;
}

CandidateVocab build_candidate_index(const Document& doc, const FilterLists& lists,
                                     const PosAnnotation* pos) {
  CandidateVocab vocab;
  vocab.sentence_count = doc.sentences.size();
  std::size_t token_index = 0;

  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const auto& token : tokenize(doc.sentences[s])) {
      const std::size_t t = token_index++;
      if (pos != nullptr) {
        if (t >= pos->surfaces.size() || pos->surfaces[t] != token)
          throw Error(ErrorCode::PosMisaligned,
                      "annotation token " + std::to_string(t) + " does not match '" + token + "'");
        if (!is_noun_or_adjective(pos->tags[t])) continue;
      }
      if (!keep_token(token, lists)) continue;
      std::string stemmed = stem(token);
      if (!keep_token(stemmed, lists)) continue;

      auto [it, inserted] = vocab.index.try_emplace(std::move(stemmed), vocab.stems.size());
      if (inserted) {
        vocab.stems.push_back(it->first);
        vocab.first_sentence.push_back(s + 1);
        vocab.first_position.push_back(vocab.stream.size());
        vocab.term_frequency.push_back(0);
      }
      ++vocab.term_frequency[it->second];
      vocab.stream.push_back(it->second);
      vocab.stream_sentence.push_back(s + 1);
    }
  }
  if (pos != nullptr && token_index != pos->surfaces.size())
    throw Error(ErrorCode::PosMisaligned, "annotation has " + std::to_string(pos->surfaces.size()) +
                                              " tokens, document has " + std::to_string(token_index));
  if (vocab.stream.empty())
    throw Error(ErrorCode::NoCandidates, "no candidate words left after filtering in '" + doc.id + "'");
  return vocab;
}

}  // namespace lvke
