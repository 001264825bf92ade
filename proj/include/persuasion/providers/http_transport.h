#ifndef PERSUASION_PROVIDERS_HTTP_TRANSPORT_H_
#define PERSUASION_PROVIDERS_HTTP_TRANSPORT_H_

#include "persuasion/providers/provider.h"

namespace persuasion::providers {

// POSTs the request as UTF-8 JSON to cfg.endpoint. A non-2xx status or a
// connection failure is a TransportError; a body of
// {"error": {"kind": "capability", ...}} is a CapabilityError.
class HttpTransport : public Transport {
 public:
  Json Post(const ProviderConfig& cfg, const Json& request) override;
};

}  // namespace persuasion::providers

#endif  // PERSUASION_PROVIDERS_HTTP_TRANSPORT_H_
