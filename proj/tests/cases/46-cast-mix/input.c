int main() {
    int i;
    double d;
    unsigned int u;
    char c;
    i = -7;
    d = (double)i / 2.0;
    u = (unsigned int)i;
    c = (char)u;
    i = (int)d + (int)c;
    return i + (int)(u % (unsigned int)100);
}
