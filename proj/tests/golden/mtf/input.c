extern void record(int v);

unsigned char yy[256];
int nMTF = 0;

void generateMTFValues(void) {
    int i;
    int j;
    int ll_i;
    int tmp;
    int tmp2;
    for (i = 0; i < 8; i++) {
        yy[i] = (unsigned char) i;
    }
    for (i = 0; i < 6; i++) {
        ll_i = i % 3 + 1;
        j = 0;
        tmp = (int) yy[j];
        while (ll_i != tmp) {
            j = j + 1;
            tmp2 = tmp;
            tmp = (int) yy[j];
            yy[j] = (unsigned char) tmp2;
        }
        yy[0] = (unsigned char) tmp;
        if (j == 0) {
            nMTF = nMTF + 1;
        } else {
            record(j);
        }
    }
}

int main() {
    generateMTFValues();
    return nMTF;
}
