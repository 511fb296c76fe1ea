#include "symdyn/induced.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "symdyn/entropy.hpp"

namespace symdyn {

MarkedSet::MarkedSet(Alphabet alphabet, std::span<const Symbol> marked)
    : alphabet_(alphabet), mask_(alphabet.size(), false) {
  require(!marked.empty(), Errc::invalid_argument, "marked set is empty");
  for (Symbol s : marked) {
    require(alphabet.contains(s), Errc::invalid_argument,
            "marked symbol " + std::to_string(s) + " outside alphabet");
    mask_[s] = true;
  }
}

MarkedSet MarkedSet::nonzero(Alphabet alphabet) {
  require(alphabet.size() >= 2, Errc::invalid_argument, "nonzero marked set needs l >= 2");
  std::vector<Symbol> s;
  for (Symbol x = 1; x < alphabet.size(); ++x) s.push_back(x);
  return MarkedSet(alphabet, s);
}

bool MarkedSet::is_everything() const noexcept {
  return std::all_of(mask_.begin(), mask_.end(), [](bool b) { return b; });
}

std::vector<Symbol> MarkedSet::symbols() const {
  std::vector<Symbol> s;
  for (Symbol x = 0; x < mask_.size(); ++x)
    if (mask_[x]) s.push_back(x);
  return s;
}

InducedName::InducedName(Word base, std::vector<std::size_t> entries)
    : base_(std::move(base)), entries_(std::move(entries)) {
  return_times_.reserve(entries_.empty() ? 0 : entries_.size() - 1);
  for (std::size_t k = 1; k < entries_.size(); ++k)
    return_times_.push_back(entries_[k] - entries_[k - 1]);
}

std::span<const Symbol> InducedName::return_word(std::size_t k) const {
  require(k < return_times_.size(), Errc::invalid_argument, "return word index out of range");
  return base_.symbols().subspan(entries_[k] + 1, return_times_[k]);
}

namespace {

std::vector<std::size_t> entries_of(const Word& w, const MarkedSet& e) {
  std::vector<std::size_t> pos;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (e.contains(w[j])) pos.push_back(j);
  return pos;
}

}  // namespace

InducedName induce(const Word& w, const MarkedSet& e) {
  auto pos = entries_of(w, e);
  require(pos.size() >= 2, Errc::not_enough_entries,
          "induce: E not visited enough (" + std::to_string(pos.size()) + " entries, need 2)");
  return InducedName(w, std::move(pos));
}

double ReturnTimeCensus::mass(std::size_t r) const {
  auto it = counts.find(r);
  return (it == counts.end() || returns == 0)
             ? 0.0
             : static_cast<double>(it->second) / static_cast<double>(returns);
}

ReturnTimeCensus return_time_census(const InducedName& name) {
  ReturnTimeCensus rtc;
  for (std::size_t r : name.return_times()) ++rtc.counts[r];
  rtc.returns = name.return_count();
  return rtc;
}

double marked_density(const Word& w, const MarkedSet& e) {
  require(!w.empty(), Errc::empty_input, "marked_density: empty word");
  std::size_t c = 0;
  for (Symbol s : w.symbols()) c += e.contains(s);
  return static_cast<double>(c) / static_cast<double>(w.size());
}

KacResult kac_check(const ReturnTimeCensus& rtc, double muE_hat) {
  require(rtc.returns > 0, Errc::empty_input, "kac_check: no returns");
  require(muE_hat > 0.0, Errc::invalid_argument, "kac_check: muE_hat must be positive");
  KacResult out;
  for (const auto& [r, c] : rtc.counts)
    out.mean_return += static_cast<double>(r) * static_cast<double>(c);
  out.mean_return /= static_cast<double>(rtc.returns);
  out.residual = std::abs(out.mean_return - 1.0 / muE_hat);
  return out;
}

Symbol ReturnWordDictionary::intern(std::span<const Symbol> word) {
  std::vector<Symbol> key(word.begin(), word.end());
  auto [it, inserted] = ids_.try_emplace(key, static_cast<Symbol>(words_.size() + 1));
  if (inserted) words_.push_back(std::move(key));
  return it->second;
}

const std::vector<Symbol>& ReturnWordDictionary::word(Symbol id) const {
  require(has(id), Errc::structural, "unknown return-word id " + std::to_string(id));
  return words_[id - 1];
}

AdaptedName encode_adapted_name(const Word& name, const MarkedSet& e) {
  const auto entries = entries_of(name, e);
  require(!entries.empty(), Errc::not_enough_entries, "encode_adapted_name: name never visits E");

  AdaptedName out;
  out.source_alphabet = name.alphabet().size();
  std::vector<Symbol> y(entries.back() + 1, 0);
  std::size_t start = 0;
  for (std::size_t j : entries) {
    y[j] = out.dictionary.intern(name.symbols().subspan(start, j - start + 1));
    start = j + 1;
  }
  out.symbols = Word(Alphabet(static_cast<std::uint32_t>(out.dictionary.size() + 1)), std::move(y));
  return out;
}

Word decode_adapted_name(const AdaptedName& adapted) {
  std::vector<Symbol> x;
  x.reserve(adapted.symbols.size());
  std::size_t zeros = 0;
  for (std::size_t j = 0; j < adapted.symbols.size(); ++j) {
    const Symbol id = adapted.symbols[j];
    if (id == 0) {
      ++zeros;
      continue;
    }
    const auto& word = adapted.dictionary.word(id);
    require(zeros + 1 == word.size(), Errc::structural,
            "decode_adapted_name: zero-run of length " + std::to_string(zeros) + " before index " +
                std::to_string(j) + ", return word needs " + std::to_string(word.size() - 1));
    x.insert(x.end(), word.begin(), word.end());
    zeros = 0;
  }
  require(zeros == 0, Errc::structural, "decode_adapted_name: trailing zero-run with no entry");
  return Word(Alphabet(std::max<std::uint32_t>(adapted.source_alphabet, 1)), std::move(x));
}

Word induced_word(const InducedName& name, std::size_t r_max, std::size_t* overflow_count,
                  std::size_t* alphabet_used) {
  // Symbol 0 is the overflow cell; return words get dictionary ids >= 1.
  ReturnWordDictionary dict;
  std::vector<Symbol> out;
  out.reserve(name.return_count());
  std::size_t overflow = 0;
  for (std::size_t k = 0; k < name.return_count(); ++k) {
    if (name.return_times()[k] > r_max) {
      out.push_back(0);
      ++overflow;
    } else {
      out.push_back(dict.intern(name.return_word(k)));
    }
  }
  if (overflow_count) *overflow_count = overflow;
  if (alphabet_used) *alphabet_used = dict.size() + (overflow > 0 ? 1 : 0);
  return Word(Alphabet(static_cast<std::uint32_t>(dict.size() + 1)), std::move(out));
}

AbramovResult abramov_check(const Word& w, const MarkedSet& e, std::size_t m,
                            const AbramovOptions& opts) {
  require(m >= 1, Errc::invalid_argument, "abramov_check: m must be >= 1");
  require(opts.r_max >= 1, Errc::invalid_argument, "abramov_check: r_max must be >= 1");
  AbramovResult res;
  res.m = m;

  if (e.is_everything()) {
    // Trivial induction: the induced process is the base process itself.
    const auto est = estimate_entropy_rate(w, m);
    res.h_base = res.h_induced = est.slope;
    res.muE_hat = 1.0;
    res.m_induced = m;
    res.induced_length = w.size();
    res.induced_alphabet = w.alphabet().size();
    res.max_return = 1;
    return res;
  }

  // Split off a long run outside E (the Dirac-at-a-fixed-point component).
  Word work = w;
  {
    std::size_t best_len = 0, best_start = 0, run = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      run = e.contains(w[j]) ? 0 : run + 1;
      if (run > best_len) {
        best_len = run;
        best_start = j + 1 - run;
      }
    }
    if (!w.empty() && static_cast<double>(best_len) > opts.dirac_threshold * static_cast<double>(w.size())) {
      std::vector<Symbol> kept(w.vec().begin(), w.vec().begin() + static_cast<std::ptrdiff_t>(best_start));
      kept.insert(kept.end(), w.vec().begin() + static_cast<std::ptrdiff_t>(best_start + best_len),
                  w.vec().end());
      res.alpha_hat = static_cast<double>(best_len) / static_cast<double>(w.size());
      work = Word(w.alphabet(), std::move(kept));
    }
  }

  auto base = std::async(std::launch::async, [&work, m] { return estimate_entropy_rate(work, m); });

  const InducedName name = induce(work, e);
  std::size_t overflow = 0, used = 0;
  const Word ind = induced_word(name, opts.r_max, &overflow, &used);
  const double needed = 10.0 * std::pow(static_cast<double>(w.alphabet().size()), static_cast<double>(m));
  if (static_cast<double>(ind.size()) < needed) {
    base.wait();
    fail(Errc::invalid_argument, "abramov_check: induced word has " + std::to_string(ind.size()) +
                                     " symbols, need at least 10 * l^m");
  }

  const double guard = undersampling_limit(ind.size(), static_cast<double>(used));
  std::size_t m_ind = std::min<std::size_t>(m, 4);
  if (std::isfinite(guard)) m_ind = std::min(m_ind, static_cast<std::size_t>(std::max(1.0, std::floor(guard))));

  res.h_induced = estimate_entropy_rate(ind, m_ind).slope;
  res.h_base = base.get().slope;
  res.muE_hat = marked_density(work, e);
  res.residual = std::abs(res.h_base - res.muE_hat * res.h_induced);
  res.m_induced = m_ind;
  res.induced_length = ind.size();
  res.induced_alphabet = used;
  res.overflow_mass = static_cast<double>(overflow) / static_cast<double>(ind.size());
  res.max_return = *std::max_element(name.return_times().begin(), name.return_times().end());
  res.flagged = res.overflow_mass > opts.overflow_flag_mass;
  return res;
}

}  // namespace symdyn
