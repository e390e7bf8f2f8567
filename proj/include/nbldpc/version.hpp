#pragma once

#define NBLDPC_VERSION "0.1.0"
