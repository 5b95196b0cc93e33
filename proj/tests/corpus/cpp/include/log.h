#ifndef LOG_H
#define LOG_H
#include "config.h"
#ifdef ENABLE_LOGGING
#define LOG_LEVEL 2
void log_message(const char *msg);
#else
#define LOG_LEVEL 0
#endif
#endif
