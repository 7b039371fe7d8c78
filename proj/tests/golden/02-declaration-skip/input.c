unsigned char yy[256];

int main() {
    yy[0] = 7;
    return yy[0];
}
