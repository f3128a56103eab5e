int main() { return 0; }  // filled in after the unit suite is green
