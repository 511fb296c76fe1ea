#include "symdyn/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace symdyn {

using nlohmann::json;

namespace {

ProcessSpec spec_from_json(const json& j) {
  require(j.is_object(), Errc::config, "spec: expected a JSON object");
  require(j.contains("kind"), Errc::config, "spec: missing \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "iid") return ProcessSpec::iid(j.at("probabilities").get<std::vector<double>>());
    if (kind == "markov") {
      auto rows = j.at("transition").get<std::vector<std::vector<double>>>();
      std::vector<double> pi;
      if (j.contains("stationary")) pi = j.at("stationary").get<std::vector<double>>();
      return ProcessSpec::markov(std::move(rows), std::move(pi));
    }
    if (kind == "periodic") {
      std::vector<Symbol> period;
      const auto& p = j.at("period");
      if (p.is_string()) {
        for (char c : p.get<std::string>()) {
          require(c >= '0' && c <= '9', Errc::config, "spec: period string must be digits");
          period.push_back(static_cast<Symbol>(c - '0'));
        }
      } else {
        period = p.get<std::vector<Symbol>>();
      }
      return ProcessSpec::periodic(std::move(period), j.value("alphabet", 0u));
    }
    if (kind == "mixture") {
      std::vector<ProcessSpec> comps;
      for (const auto& c : j.at("components")) comps.push_back(spec_from_json(c));
      return ProcessSpec::mixture(j.at("weights").get<std::vector<double>>(), std::move(comps));
    }
  } catch (const json::exception& e) {
    fail(Errc::config, std::string("spec (") + kind + "): " + e.what());
  }
  fail(Errc::config, "spec: unknown kind \"" + kind + "\"");
}

json spec_to_json(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidSpec>) {
          return {{"kind", "iid"}, {"probabilities", s.probabilities}};
        } else if constexpr (std::is_same_v<T, MarkovSpec>) {
          return {{"kind", "markov"}, {"transition", s.transition}, {"stationary", s.stationary}};
        } else if constexpr (std::is_same_v<T, PeriodicSpec>) {
          return {{"kind", "periodic"}, {"period", s.period}, {"alphabet", s.alphabet_size}};
        } else {
          json comps = json::array();
          for (const auto& c : s.components) comps.push_back(spec_to_json(c));
          return {{"kind", "mixture"}, {"weights", s.weights}, {"components", comps}};
        }
      },
      spec.variant());
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), Errc::io, "write failed: " + path.string());
}

ProcessSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(Errc::config, std::string("spec: ") + e.what());
  }
  return spec_from_json(j);
}

ProcessSpec load_spec(const std::filesystem::path& path) { return parse_spec(read_text(path)); }

std::string dump_spec(const ProcessSpec& spec) { return spec_to_json(spec).dump(2); }

std::string encode_rle(const Word& w) {
  std::ostringstream out;
  out << "#symdyn-rle v1 alphabet=" << w.alphabet().size() << " length=" << w.size() << "\n";
  std::size_t i = 0, runs = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    out << (runs % 16 ? " " : (runs ? "\n" : "")) << w[i];
    if (j - i > 1) out << '*' << (j - i);
    ++runs;
    i = j;
  }
  out << "\n";
  return out.str();
}

Word decode_rle(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  std::uint32_t alphabet = 0;
  std::size_t length = 0;
  require(std::sscanf(header.c_str(), "#symdyn-rle v1 alphabet=%u length=%zu", &alphabet, &length) == 2,
          Errc::io, "rle: bad header");
  std::vector<Symbol> s;
  s.reserve(length);
  std::string tok;
  while (in >> tok) {
    unsigned long sym = 0, count = 1;
    const auto star = tok.find('*');
    try {
      sym = std::stoul(tok.substr(0, star));
      if (star != std::string::npos) count = std::stoul(tok.substr(star + 1));
    } catch (const std::exception&) {
      fail(Errc::io, "rle: bad run token \"" + tok + "\"");
    }
    s.insert(s.end(), count, static_cast<Symbol>(sym));
  }
  require(s.size() == length, Errc::io, "rle: length does not match header");
  return Word(Alphabet(alphabet), std::move(s));
}

Word read_word(const std::filesystem::path& path, std::uint32_t alphabet_hint) {
  const std::string bytes = read_text(path);
  if (bytes.rfind("#symdyn-rle", 0) == 0) {
    Word w = decode_rle(bytes);
    if (alphabet_hint > w.alphabet().size()) return Word(Alphabet(alphabet_hint), w.vec());
    return w;
  }
  std::vector<Symbol> s(bytes.size());
  std::transform(bytes.begin(), bytes.end(), s.begin(),
                 [](char c) { return static_cast<Symbol>(static_cast<unsigned char>(c)); });
  std::uint32_t l = alphabet_hint;
  if (l == 0) {
    l = 2;
    for (Symbol x : s) l = std::max<std::uint32_t>(l, x + 1);
  }
  return Word(Alphabet(l), std::move(s));
}

void write_word(const Word& w, const std::filesystem::path& path, WordFormat fmt) {
  if (fmt == WordFormat::rle) {
    write_text(path, encode_rle(w));
    return;
  }
  require(w.alphabet().size() <= 256, Errc::io, "raw word format needs an alphabet of <= 256 symbols");
  std::string bytes(w.size(), '\0');
  for (std::size_t i = 0; i < w.size(); ++i) bytes[i] = static_cast<char>(w[i]);
  write_text(path, bytes);
}

MatchCertificate read_certificate(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  MatchCertificate c;
  std::size_t a = 0, b = 0;
  while (in >> a >> b) {
    c.left.push_back(a);
    c.right.push_back(b);
  }
  require(in.eof(), Errc::io, "certificate: expected \"<i> <i'>\" pairs");
  return c;
}

void write_certificate(const MatchCertificate& cert, const std::filesystem::path& path) {
  std::ostringstream out;
  for (std::size_t s = 0; s < cert.size(); ++s) out << cert.left[s] << ' ' << cert.right[s] << '\n';
  write_text(path, out.str());
}

}  // namespace symdyn
