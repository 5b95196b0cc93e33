#include "include/log.h"
int level = LOG_LEVEL;
char buffer[BUFFER_SIZE];
const char *name = APP_NAME;
