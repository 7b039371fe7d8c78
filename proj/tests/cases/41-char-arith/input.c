int main() {
    char c;
    char d;
    c = 'A';
    d = (char)(c + (char)2);
    if (d == 'C') {
        return (int)d;
    }
    return 0;
}
