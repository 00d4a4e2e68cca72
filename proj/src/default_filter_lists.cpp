#include "lvke/text_pipeline.hpp"

namespace lvke {

FilterLists FilterLists::defaults() {
  FilterLists lists;

  // Classic English stopwords.
  lists.stopwords = {
      "i",        "me",        "my",      "myself",   "we",       "our",      "ours",
      "ourselves", "you",      "your",    "yours",    "yourself", "yourselves", "he",
      "him",      "his",       "himself", "she",      "her",      "hers",     "herself",
      "it",       "its",       "itself",  "they",     "them",     "their",    "theirs",
      "themselves", "what",    "which",   "who",      "whom",     "this",     "that",
      "these",    "those",     "am",      "is",       "are",      "was",      "were",
      "be",       "been",      "being",   "have",     "has",      "had",      "having",
      "do",       "does",      "did",     "doing",    "a",        "an",       "the",
      "and",      "but",       "if",      "or",       "because",  "as",       "until",
      "while",    "of",        "at",      "by",       "for",      "with",     "about",
      "against",  "between",   "into",    "through",  "during",   "before",   "after",
      "above",    "below",     "to",      "from",     "up",       "down",     "in",
      "out",      "on",        "off",     "over",     "under",    "again",    "further",
      "then",     "once",      "here",    "there",    "when",     "where",    "why",
      "how",      "all",       "any",     "both",     "each",     "few",      "more",
      "most",     "other",     "some",    "such",     "no",       "nor",      "not",
      "only",     "own",       "same",    "so",       "than",     "too",      "very",
      "can",      "will",      "just",    "don",      "should",   "now",      "ll",
      "re",       "ve",        "didn",    "doesn",    "hadn",     "hasn",     "haven",
      "isn",      "wasn",      "weren",   "won",      "wouldn",   "shouldn",  "couldn",
      "aren",     "mightn",    "mustn",   "needn",    "shan",
  };

  lists.common_adjectives = {
      "good",      "new",       "first",    "last",      "long",      "great",
      "little",    "old",       "right",    "big",       "high",      "different",
      "small",     "large",     "next",     "early",     "young",     "important",
      "bad",       "able",      "best",     "better",    "certain",   "various",
      "general",   "particular", "possible", "simple",    "similar",   "recent",
      "previous",  "following", "current",  "second",    "third",     "whole",
      "real",      "full",      "free",     "true",      "clear",     "easy",
      "hard",      "low",       "likely",   "major",     "specific",  "usual",
      "entire",    "main",      "typical",  "additional", "corresponding", "respective",
      "appropriate", "relevant", "necessary", "existing", "overall",  "interesting",
      "larger",    "smaller",   "higher",   "lower",     "greater",   "less",
  };

  lists.reporting_verbs = {
      "say",       "says",      "said",      "saying",     "state",      "states",
      "stated",    "claim",     "claims",    "claimed",    "argue",      "argues",
      "argued",    "suggest",   "suggests",  "suggested",  "show",       "shows",
      "showed",    "shown",     "propose",   "proposes",   "proposed",   "describe",
      "describes", "described", "mention",   "mentions",   "mentioned",  "note",
      "notes",     "noted",     "explain",   "explains",   "explained",  "discuss",
      "discusses", "discussed", "demonstrate", "demonstrates", "demonstrated", "indicate",
      "indicates", "indicated", "observe",   "observes",   "observed",   "conclude",
      "concludes", "concluded", "believe",   "believes",   "believed",   "assert",
      "asserts",   "asserted",  "report",    "reports",    "reported",   "illustrate",
      "illustrates", "illustrated", "consider", "considers", "considered", "discover",
      "discovers", "discovered", "find",     "finds",      "found",
  };

  lists.determiners = {
      "a",       "an",      "the",       "this",     "that",   "these",  "those",
      "my",      "your",    "his",       "her",      "its",    "our",    "their",
      "each",    "every",   "either",    "neither",  "some",   "any",    "no",
      "much",    "many",    "few",       "several",  "all",    "both",   "half",
      "another", "other",   "such",      "what",     "which",  "whose",  "whatever",
      "whichever", "enough", "little",
  };

  lists.functional_words = {
      "however",   "therefore", "thus",       "hence",     "also",      "although",
      "though",    "moreover",  "furthermore", "whereas",  "whether",   "since",
      "unless",    "via",       "per",        "upon",      "within",    "without",
      "among",     "amongst",   "towards",    "toward",    "throughout", "etc",
      "et",        "al",        "eg",         "ie",        "could",     "may",
      "might",     "must",      "shall",      "would",     "one",       "two",
      "three",     "four",      "five",       "six",       "seven",     "eight",
      "nine",      "ten",       "yet",        "still",     "already",   "often",
      "usually",   "rather",    "quite",      "well",      "even",      "instead",
      "namely",    "respectively", "otherwise", "indeed",  "like",      "unlike",
      "let",       "us",        "every",      "whose",     "thereby",   "therein",
      "wherein",   "whereby",   "besides",    "beyond",    "along",     "around",
      "else",      "ever",      "never",      "always",    "sometimes", "perhaps",
      "almost",    "nearly",    "mostly",     "mainly",    "simply",    "especially",
      "fig",       "figure",    "table",      "section",   "eq",        "ii",
      "iii",       "iv",
  };

  return lists;
}

}  // namespace lvke
