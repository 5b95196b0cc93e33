#define OS_LINUX
#define ARCH_X86
#ifdef OS_LINUX
#ifdef ARCH_X86
const char *target = "linux-x86";
#else
const char *target = "linux-other";
#endif
#else
#ifndef ARCH_X86
const char *target = "other";
#endif
#endif
