// Placeholder main; the full command-line front end lands with the harness.
int main() { return 0; }
