#pragma once

#ifndef POLYDIST_VERSION
#define POLYDIST_VERSION "0.1.0"
#endif
