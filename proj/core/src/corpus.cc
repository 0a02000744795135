// Copyright 2026 The absa-promptkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "absa/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "absa/text.h"

namespace absa {
namespace {

namespace pt = boost::property_tree;

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

pt::ptree ReadXmlTree(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed ABSA XML: " + e.message(), e.line());
  }
  return tree;
}

std::string Attribute(const pt::ptree& node, const std::string& name) {
  return node.get<std::string>("<xmlattr>." + name, "");
}

// Visits every <sentence> in document order, with its review id.
template <typename Fn>
void ForEachSentence(const pt::ptree& tree, Fn&& fn) {
  auto reviews = tree.get_child_optional("Reviews");
  if (!reviews) throw ParseError("ABSA XML has no <Reviews> root", 0);
  for (const auto& [tag, review] : *reviews) {
    if (tag != "Review") continue;
    const std::string rid = Attribute(review, "rid");
    auto sentences = review.get_child_optional("sentences");
    if (!sentences) continue;
    for (const auto& [stag, sentence] : *sentences) {
      if (stag == "sentence") fn(rid, sentence);
    }
  }
}

template <typename Fn>
void ForEachOpinion(const pt::ptree& sentence, Fn&& fn) {
  auto opinions = sentence.get_child_optional("Opinions");
  if (!opinions) return;
  for (const auto& [tag, opinion] : *opinions) {
    if (tag == "Opinion") fn(opinion);
  }
}

std::vector<AbsaSentence> ParseTree(const pt::ptree& tree,
                                    const CategorySet& allowed) {
  std::vector<AbsaSentence> out;
  std::unordered_set<std::string> seen_ids;
  ForEachSentence(tree, [&](const std::string& rid, const pt::ptree& node) {
    AbsaSentence s;
    s.review_id = rid;
    s.sentence_id = Attribute(node, "id");
    if (s.sentence_id.empty()) {
      throw ValidationError("sentence without id in review '" + rid + "'");
    }
    if (!seen_ids.insert(s.sentence_id).second) {
      throw ValidationError("duplicate sentence id '" + s.sentence_id + "'");
    }
    s.text = node.get<std::string>("text", "");
    ForEachOpinion(node, [&](const pt::ptree& opinion) {
      const std::string category_name = Attribute(opinion, "category");
      AspectCategory category = AspectCategory::Parse(category_name);
      if (!allowed.contains(category)) {
        throw ValidationError("sentence '" + s.sentence_id +
                              "': category '" + category_name +
                              "' is not in the allowed category set");
      }
      const std::string polarity_name = Attribute(opinion, "polarity");
      Polarity polarity;
      try {
        polarity = ParsePolarity(polarity_name);
      } catch (const ValidationError& e) {
        throw ValidationError("sentence '" + s.sentence_id + "': " +
                              e.what());
      }
      std::optional<std::string> term;
      const std::string target = Attribute(opinion, "target");
      if (!text::Trim(target).empty() && target != "NULL") term = target;
      s.triplets.emplace_back(std::move(category), std::move(term), polarity);
    });
    out.push_back(std::move(s));
  });
  return out;
}

}  // namespace

Polarity StarToPolarity(int stars) {
  if (stars < 0 || stars > 5) {
    throw ValidationError("star rating " + std::to_string(stars) +
                          " is outside 0..5");
  }
  if (stars <= 1) return Polarity::kNegative;
  if (stars <= 3) return Polarity::kNeutral;
  return Polarity::kPositive;
}

std::vector<AbsaSentence> ParseAbsaXml(std::istream& in,
                                       const CategorySet& allowed) {
  return ParseTree(ReadXmlTree(in), allowed);
}

std::vector<AbsaSentence> LoadAbsaCorpus(const std::filesystem::path& path,
                                         const CategorySet& allowed) {
  auto in = OpenOrThrow(path);
  try {
    return ParseAbsaXml(in, allowed);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

CategorySet ObservedCategories(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  const pt::ptree tree = ReadXmlTree(in);
  CategorySet set;
  ForEachSentence(tree, [&](const std::string&, const pt::ptree& node) {
    ForEachOpinion(node, [&](const pt::ptree& opinion) {
      set.insert(AspectCategory::Parse(Attribute(opinion, "category")));
    });
  });
  return set;
}

void WriteAbsaXml(std::ostream& out, std::span<const AbsaSentence> sentences) {
  pt::ptree root;
  pt::ptree& reviews = root.add_child("Reviews", pt::ptree());
  pt::ptree* review = nullptr;
  std::string current_rid;
  for (const AbsaSentence& s : sentences) {
    if (review == nullptr || s.review_id != current_rid) {
      review = &reviews.add_child("Review", pt::ptree());
      review->put("<xmlattr>.rid", s.review_id);
      review->add_child("sentences", pt::ptree());
      current_rid = s.review_id;
    }
    pt::ptree& node =
        review->get_child("sentences").add_child("sentence", pt::ptree());
    node.put("<xmlattr>.id", s.sentence_id);
    node.put("text", s.text);
    if (s.triplets.empty()) continue;
    pt::ptree& opinions = node.add_child("Opinions", pt::ptree());
    for (const OpinionTriplet& t : s.triplets) {
      pt::ptree& o = opinions.add_child("Opinion", pt::ptree());
      o.put("<xmlattr>.target", t.term.value_or("NULL"));
      o.put("<xmlattr>.category", t.category.canonical());
      o.put("<xmlattr>.polarity", std::string(PolarityName(t.polarity)));
    }
  }
  pt::write_xml(out, root,
                pt::xml_writer_make_settings<std::string>(' ', 2, "utf-8"));
}

std::vector<PolarityDocument> ParsePolarityTsv(std::istream& in) {
  std::vector<PolarityDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> cols = text::Split(line, "\t");
    if (line_no == 1) {
      if (!line.empty() && line.rfind("\xEF\xBB\xBF", 0) == 0) {
        cols = text::Split(std::string_view(line).substr(3), "\t");
      }
      const bool ok = (cols.size() == 2 || cols.size() == 3) &&
                      cols[0] == "label" && cols[1] == "text" &&
                      (cols.size() == 2 || cols[2] == "stars");
      if (!ok) {
        throw ParseError(
            "polarity TSV header must be 'label<TAB>text[<TAB>stars]'", 1);
      }
      n_columns = cols.size();
      continue;
    }
    if (line.empty()) continue;
    if (cols.size() != n_columns) {
      throw ParseError("row " + std::to_string(line_no - 1) + " has " +
                           std::to_string(cols.size()) + " columns, expected " +
                           std::to_string(n_columns),
                       line_no);
    }
    PolarityDocument doc;
    doc.doc_id = "doc-" + std::to_string(line_no - 1);
    doc.text = std::string(cols[1]);
    try {
      doc.label = ParsePolarity(cols[0]);
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(line_no - 1) + ": " +
                            e.what());
    }
    if (n_columns == 3 && !text::Trim(cols[2]).empty()) {
      const std::string stars_text(text::Trim(cols[2]));
      int stars = 0;
      std::size_t used = 0;
      try {
        stars = std::stoi(stars_text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != stars_text.size()) {
        throw ParseError("row " + std::to_string(line_no - 1) +
                             ": stars value '" + stars_text +
                             "' is not an integer",
                         line_no);
      }
      if (StarToPolarity(stars) != doc.label) {
        throw ValidationError(
            "row " + std::to_string(line_no - 1) + ": label '" +
            std::string(PolarityName(doc.label)) + "' disagrees with " +
            std::to_string(stars) + " stars");
      }
      doc.stars = stars;
    }
    docs.push_back(std::move(doc));
  }
  if (line_no == 0) throw ParseError("polarity TSV is empty (no header)", 0);
  return docs;
}

std::vector<PolarityDocument> LoadPolarityCorpus(
    const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParsePolarityTsv(in);
}

SplitSpec SplitSpec::FewShot(std::size_t n) {
  if (n == 0) throw ValidationError("few-shot size must be positive");
  return SplitSpec(Kind::kFewShot, n);
}

std::string SplitSpec::Describe() const {
  switch (kind_) {
    case Kind::kFull:
      return "full";
    case Kind::kZeroShot:
      return "zero-shot";
    case Kind::kFewShot:
      return "few-shot " + std::to_string(n_);
  }
  return "full";
}

std::vector<ClassificationExample> ApdExamples(
    std::span<const AbsaSentence> sentences) {
  std::vector<ClassificationExample> out;
  for (const AbsaSentence& s : sentences) {
    for (std::size_t k = 0; k < s.triplets.size(); ++k) {
      const OpinionTriplet& t = s.triplets[k];
      out.push_back({s.sentence_id + "#" + std::to_string(k), s.text,
                     AspectTuple{t.category, t.term}, t.polarity});
    }
  }
  return out;
}

std::vector<ClassificationExample> ScExamples(
    std::span<const PolarityDocument> documents) {
  std::vector<ClassificationExample> out;
  out.reserve(documents.size());
  for (const PolarityDocument& d : documents) {
    out.push_back({d.doc_id, d.text, std::nullopt, d.label});
  }
  return out;
}

std::string NormalizeForDedup(std::string_view review) {
  return text::CollapseWhitespace(text::NormalizeNfc(review));
}

DedupFilter::DedupFilter(std::span<const std::string> annotated) {
  normalized_.reserve(annotated.size());
  for (const std::string& a : annotated) {
    normalized_.insert(NormalizeForDedup(a));
  }
}

bool DedupFilter::IsAnnotated(std::string_view review) const {
  if (normalized_.empty()) return false;
  return normalized_.count(NormalizeForDedup(review)) > 0;
}

DedupStats DedupStream(std::istream& raw, std::ostream& out,
                       const DedupFilter& filter) {
  DedupStats stats;
  std::string line;
  while (std::getline(raw, line)) {
    ++stats.read;
    if (filter.IsAnnotated(line)) {
      ++stats.removed;
      continue;
    }
    out << line << '\n';
    ++stats.kept;
  }
  return stats;
}

}  // namespace absa
