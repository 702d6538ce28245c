#include "symscat/network.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "symscat/errors.hpp"

namespace symscat {

namespace {

bool coupling_equals(double g, double j) { return std::abs(g - j) <= 1e-14 * std::abs(j); }

}  // namespace

Momentum::Momentum(double k) : k_(k) {
  if (!in_band(k))
    throw OutOfBand("momentum k = " + std::to_string(k) + " is outside the open interval (-pi, 0)");
}

bool Momentum::in_band(double k) noexcept {
  return std::isfinite(k) && k > -std::numbers::pi && k < 0.0;
}

void validate(const ScatteringNetwork& net) {
  if (net.hc.empty() || !net.hc.square())
    throw ValidationError("center matrix hc must be square and non-empty (got " +
                          std::to_string(net.hc.rows()) + "x" + std::to_string(net.hc.cols()) + ")");
  if (!is_finite(net.hc)) throw ValidationError("center matrix hc has non-finite entries");
  if (!(net.j_lead > 0.0) || !std::isfinite(net.j_lead))
    throw ValidationError("lead hopping J must be positive and finite");
  if (!std::isfinite(net.omega0)) throw ValidationError("omega0 must be finite");
  std::set<int> ids;
  std::set<std::size_t> sites;
  for (const auto& lead : net.leads) {
    if (lead.site >= net.size())
      throw ValidationError("lead " + std::to_string(lead.id) + " attaches to site " +
                            std::to_string(lead.site + 1) + " outside the center");
    if (!std::isfinite(lead.g))
      throw ValidationError("lead " + std::to_string(lead.id) + " has non-finite coupling");
    if (!ids.insert(lead.id).second)
      throw ValidationError("duplicate lead id " + std::to_string(lead.id));
    if (!sites.insert(lead.site).second)
      throw ValidationError("two leads attach to site " + std::to_string(lead.site + 1));
  }
}

const LeadAttachment& find_lead(const ScatteringNetwork& net, int lead_id) {
  for (const auto& lead : net.leads)
    if (lead.id == lead_id) return lead;
  throw UnknownLead("no lead with id " + std::to_string(lead_id));
}

double dispersion(const ScatteringNetwork& net, Momentum k) {
  return net.omega0 + 2.0 * net.j_lead * std::cos(k.value());
}

Momentum momentum_for_frequency(const ScatteringNetwork& net, double omega) {
  const double x = (omega - net.omega0) / (2.0 * net.j_lead);
  if (!(std::abs(x) < 1.0))
    throw OutOfBand("frequency " + std::to_string(omega) + " lies outside the open band");
  return Momentum(-std::acos(x));
}

bool is_normalized(const ScatteringNetwork& net) {
  for (const auto& lead : net.leads)
    if (!coupling_equals(lead.g, net.j_lead)) return false;
  return true;
}

ScatteringNetwork augment_general_coupling(const ScatteringNetwork& net) {
  ScatteringNetwork out;
  out.j_lead = net.j_lead;
  out.omega0 = net.omega0;

  std::vector<LeadAttachment> absorbed;
  for (const auto& lead : net.leads) {
    if (lead.g == 0.0) continue;
    if (coupling_equals(lead.g, net.j_lead))
      out.leads.push_back({lead.id, lead.site, net.j_lead});
    else
      absorbed.push_back(lead);
  }

  const std::size_t n = net.size();
  out.hc = CMatrix(n + absorbed.size(), n + absorbed.size());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.hc(r, c) = net.hc(r, c);
  for (std::size_t i = 0; i < absorbed.size(); ++i) {
    const std::size_t added = n + i;
    out.hc(absorbed[i].site, added) = absorbed[i].g;
    out.hc(added, absorbed[i].site) = absorbed[i].g;
    out.leads.push_back({absorbed[i].id, added, net.j_lead});
  }
  return out;
}

CMatrix effective_two_port(const ScatteringNetwork& net, int lead_m, int lead_n, Momentum k) {
  if (lead_m == lead_n) throw SamePort("ports must be distinct leads");
  find_lead(net, lead_m);
  find_lead(net, lead_n);
  CMatrix h = net.hc;
  const Complex phase = std::exp(kI * k.value()) / net.j_lead;
  for (const auto& lead : net.leads) {
    if (lead.id == lead_m || lead.id == lead_n) continue;
    h(lead.site, lead.site) += lead.g * lead.g * phase;
  }
  return h;
}

ScatteringNetwork parse_network(std::string_view text) {
  using detail::json;
  const json doc = detail::parse_document(text);
  detail::reject_unknown_keys(doc, {"n", "omega0", "J", "hc", "leads"}, "");

  ScatteringNetwork net;
  const auto n = detail::as_integer(detail::require(doc, "n", ""), "n");
  if (n < 1) throw ValidationError("n must be at least 1");
  net.j_lead = detail::as_real(detail::require(doc, "J", ""), "J");
  if (doc.contains("omega0")) net.omega0 = detail::as_real(doc["omega0"], "omega0");
  net.hc = detail::as_matrix(detail::require(doc, "hc", ""), "hc");
  if (net.hc.rows() != net.hc.cols())
    throw ValidationError("hc must be square (got " + std::to_string(net.hc.rows()) + "x" +
                          std::to_string(net.hc.cols()) + ")");
  if (net.hc.rows() != static_cast<std::size_t>(n))
    throw ValidationError("hc is " + std::to_string(net.hc.rows()) + "x" +
                          std::to_string(net.hc.cols()) + " but n = " + std::to_string(n));

  const json& leads = detail::require(doc, "leads", "");
  if (!leads.is_array()) throw ParseError("expected an array", 0, "leads");
  for (std::size_t i = 0; i < leads.size(); ++i) {
    const std::string where = "leads[" + std::to_string(i) + "].";
    detail::reject_unknown_keys(leads[i], {"id", "site", "g"}, where);
    const auto id = detail::as_integer(detail::require(leads[i], "id", where), where + "id");
    const auto site = detail::as_integer(detail::require(leads[i], "site", where), where + "site");
    if (site < 1 || site > n)
      throw ValidationError("lead site " + std::to_string(site) + " outside 1.." + std::to_string(n));
    LeadAttachment lead;
    lead.id = static_cast<int>(id);
    lead.site = static_cast<std::size_t>(site - 1);
    lead.g = leads[i].contains("g") ? detail::as_real(leads[i]["g"], where + "g") : net.j_lead;
    net.leads.push_back(lead);
  }
  validate(net);
  return net;
}

std::string serialize_network(const ScatteringNetwork& net) {
  std::ostringstream out;
  out << "{\n"
      << "  \"n\": " << net.size() << ",\n"
      << "  \"omega0\": " << detail::number(net.omega0) << ",\n"
      << "  \"J\": " << detail::number(net.j_lead) << ",\n"
      << "  \"hc\": " << detail::matrix_literal(net.hc, "  ") << ",\n"
      << "  \"leads\": [";
  for (std::size_t i = 0; i < net.leads.size(); ++i) {
    const auto& lead = net.leads[i];
    out << (i ? ",\n" : "\n") << "    {\"id\": " << lead.id << ", \"site\": " << lead.site + 1
        << ", \"g\": " << detail::number(lead.g) << "}";
  }
  out << (net.leads.empty() ? "]\n" : "\n  ]\n") << "}\n";
  return out.str();
}

ScatteringNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open network file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

}  // namespace symscat
