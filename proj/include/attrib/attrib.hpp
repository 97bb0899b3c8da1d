#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

// Everything except the HTTP pieces (httplib_transport.hpp, http_server.hpp,
// cli.hpp), which pull in cpp-httplib.

#include "attribution.hpp"
#include "chat.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "dialogue.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "explanation.hpp"
#include "json.hpp"
#include "remote_scorer.hpp"
#include "report.hpp"
#include "score_cache.hpp"
#include "scoring.hpp"
#include "service.hpp"
#include "session_store.hpp"
#include "similarity.hpp"
#include "synthetic.hpp"
#include "transport.hpp"
#include "utf8.hpp"
